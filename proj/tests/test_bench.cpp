// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"
#include "spaceswitch/bench.hpp"

using namespace spaceswitch;

namespace {

const BenchRow& row_of(const BenchTable& t, u32 bw, const std::string& strat) {
  for (const BenchRow& r : t.rows)
    if (r.bitwidth == bw && r.strategy == strat) return r;
  FAIL("missing bench row ", bw, "/", strat);
  return t.rows.front();
}

}  // namespace

TEST_CASE("bench meters switch and direct pipelines across bitwidths") {
  BenchTable t = run_bench({8, 12}, {"space-switch", "direct"});
  REQUIRE(t.rows.size() == 4);
  CHECK(t.skipped.empty());

  const BenchRow& sw8 = row_of(t, 8, "space-switch");
  CHECK(sw8.p == 23);
  CHECK(sw8.r == 2);
  CHECK(sw8.report.totals.nonscalar_mults == 38);
  CHECK(sw8.report.depth == 19);

  const BenchRow& sw12 = row_of(t, 12, "space-switch");
  CHECK(sw12.p == 7);
  CHECK(sw12.r == 5);
  CHECK(sw12.report.totals.nonscalar_mults == 61);

  const BenchRow& d8 = row_of(t, 8, "direct");
  CHECK(d8.p == 521);
  CHECK(d8.r == 1);
  CHECK(d8.report.totals.nonscalar_mults == 48);
  // No digits to peel or lift back at r = 1.
  CHECK(d8.report.stages.at("reduction").nonscalar_mults == 0);
  CHECK(d8.report.stages.at("raise").nonscalar_mults == 0);

  const BenchRow& d12 = row_of(t, 12, "direct");
  CHECK(d12.p == 8209);

  // Four extra bits grow the switched count gently and the direct count
  // steeply (square-root of the modulus, which went up 16x).
  double sw_growth = double(sw12.report.totals.nonscalar_mults) /
                     double(sw8.report.totals.nonscalar_mults);
  double d_growth =
      double(d12.report.totals.nonscalar_mults) / double(d8.report.totals.nonscalar_mults);
  CHECK(sw_growth < 2.0);
  CHECK(d_growth > 3.0);
  CHECK(sw_growth < d_growth);

  // Stage shape over the switched rows, taken together: the aggregation
  // step is a sliver and the digit work dominates.
  u64 agg = 0, redcmp = 0, total = 0;
  for (const BenchRow* r : {&sw8, &sw12}) {
    agg += r->report.stages.at("aggregation").nonscalar_mults;
    redcmp += r->report.stages.at("reduction").nonscalar_mults +
              r->report.stages.at("digit-compare").nonscalar_mults;
    total += r->report.totals.nonscalar_mults;
  }
  CHECK(agg * 10 < total);
  CHECK(redcmp * 10 > total * 7);
}

TEST_CASE("bench skips configurations it cannot build, with a note") {
  BenchTable t = run_bench({16}, {"direct", "space-switch"});
  REQUIRE(t.skipped.size() == 1);
  CHECK(t.skipped[0].strategy == "direct");
  CHECK(t.skipped[0].note.find("no single-digit prime") != std::string::npos);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].strategy == "space-switch");

  CHECK_THROWS_AS(run_bench({8}, {"bogus"}), Error);
  CHECK_THROWS_AS(run_bench({8}, {"space-switch"}, "gpu"), Error);
}

TEST_CASE("bench renders csv and versioned json") {
  BenchTable t = run_bench({8}, {"space-switch", "chen-han", "direct"});
  REQUIRE(t.rows.size() == 3);

  nlohmann::json j = nlohmann::json::parse(t.to_json());
  CHECK(j.at("schema") == 1);
  CHECK(j.at("rows").size() == 3);
  CHECK(j.at("rows")[0].at("strategy") == "space-switch");
  CHECK(j.at("rows")[0].at("stages").contains("digit-compare"));

  std::string csv = t.to_csv();
  CHECK(csv.find("bitwidth,strategy,p,r,modulus,nonscalar") != std::string::npos);
  CHECK(csv.find("8,space-switch,23,2,529,38") != std::string::npos);
  CHECK(csv.find("8,direct,521,1,521,48") != std::string::npos);

  std::string text = t.to_text();
  CHECK(text.find("digit-compare") != std::string::npos);
  CHECK(text.find("(23, 2)") != std::string::npos);
}

TEST_CASE("lattice rerun reproduces the cleartext counts") {
  BenchTable clear = run_bench({8}, {"space-switch"});
  BenchTable bgv = run_bench({8}, {"space-switch"}, "bgv");
  REQUIRE(bgv.rows.size() == 1);
  CHECK(bgv.rows[0].report.backend == "bgv");
  CHECK(bgv.rows[0].report.totals.nonscalar_mults ==
        clear.rows[0].report.totals.nonscalar_mults);
  CHECK(bgv.rows[0].report.depth == clear.rows[0].report.depth);
}
