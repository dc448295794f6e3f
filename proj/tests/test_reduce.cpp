// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/reduce.hpp"
#include "spaceswitch/ring.hpp"

using namespace spaceswitch;

namespace {

const std::vector<ExtractionStrategy> kAllStrategies = {
    ExtractionStrategy::HaleviShoup,
    ExtractionStrategy::ChenHan,
    ExtractionStrategy::Geelen,
    ExtractionStrategy::SpaceSwitch,
};

ParamSet make_ps(u64 p, u32 r, u32 levels, std::size_t slots, u64 seed = 7) {
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = levels;
  ps.slots = slots;
  ps.seed = seed;
  return ps;
}

}  // namespace

TEST_CASE("every strategy recovers the balanced digits of every input") {
  for (auto [p, r] : std::vector<std::pair<u64, u32>>{{3, 2}, {3, 3}, {5, 2}, {5, 3}, {7, 2}, {7, 3}}) {
    const u64 m = checked_pow(p, r);
    std::vector<u64> all(m);
    for (u64 x = 0; x < m; ++x) all[x] = x;

    for (ExtractionStrategy s : kAllStrategies) {
      CAPTURE(p);
      CAPTURE(r);
      CAPTURE(strategy_name(s));
      ClearEval ev(make_ps(p, r, 128, m));
      CipherHandle h = ev.encode_vector(all);
      auto digits = reduce_to_digits(ev, h, s);
      REQUIRE(digits.size() == r);
      for (u32 i = 0; i < r; ++i) {
        CHECK(digits[i].tag_exp == 1);
        auto got = ev.decode(digits[i]);
        for (u64 x = 0; x < m; ++x) {
          u64 want = to_canonical(base_p_digits(x, p, r)[i], p);
          if (got[x] != want) {
            CAPTURE(x);
            CAPTURE(i);
            REQUIRE(got[x] == want);
          }
        }
      }
    }
  }
}

TEST_CASE("digit extraction on pinned examples") {
  ClearEval ev(make_ps(5, 3, 64, 2));
  CipherHandle h = ev.encode_vector({117, 33});
  auto digits = reduce_to_digits(ev, h);
  // 117 = 2 - 2*5 + 0*25, 33 = -2 + 2*5 + 1*25 in balanced digits
  CHECK(ev.decode(digits[0]) == std::vector<u64>{2, 3});
  CHECK(ev.decode(digits[1]) == std::vector<u64>{3, 2});
  CHECK(ev.decode(digits[2]) == std::vector<u64>{0, 1});
}

TEST_CASE("measured polynomial tallies match the predicted tables") {
  for (auto [p, r] : std::vector<std::pair<u64, u32>>{{3, 4}, {5, 4}, {5, 3}, {5, 2}, {7, 2}}) {
    for (ExtractionStrategy s : kAllStrategies) {
      CAPTURE(p);
      CAPTURE(r);
      CAPTURE(strategy_name(s));
      ClearEval ev(make_ps(p, r, 128, 1));
      CipherHandle h = ev.encode_vector({checked_pow(p, r) - 1});
      reduce_to_digits(ev, h, s);
      CHECK(ev.ledger().poly_evals() == extraction_eval_counts(s, p, r));
    }
  }
}

TEST_CASE("predicted tally table at four digits") {
  // one lift chain per position for Halevi-Shoup: 3+2+1
  auto hs = extraction_eval_counts(ExtractionStrategy::HaleviShoup, 5, 4);
  CHECK(hs == std::map<std::string, u64>{{"digit_lift", 6}});

  auto ch = extraction_eval_counts(ExtractionStrategy::ChenHan, 5, 4);
  CHECK(ch == std::map<std::string, u64>{
                  {"digit_lift", 3}, {"retain[2]", 1}, {"retain[3]", 1}, {"retain[4]", 1}});

  auto ge = extraction_eval_counts(ExtractionStrategy::Geelen, 5, 4);
  CHECK(ge == std::map<std::string, u64>{{"retain[2]", 3}, {"retain[3]", 2}, {"retain[4]", 1}});

  auto ss = extraction_eval_counts(ExtractionStrategy::SpaceSwitch, 5, 4);
  CHECK(ss == std::map<std::string, u64>{{"retain[2]", 1}, {"retain[3]", 1}, {"retain[4]", 1}});

  // single digit: nothing to evaluate
  for (ExtractionStrategy s : kAllStrategies) CHECK(extraction_eval_counts(s, 5, 1).empty());
}

TEST_CASE("single-digit space needs no work") {
  ClearEval ev(make_ps(7, 1, 4, 3));
  CipherHandle h = ev.encode_vector({0, 3, 6});
  auto digits = reduce_to_digits(ev, h);
  REQUIRE(digits.size() == 1);
  CHECK(ev.decode(digits[0]) == std::vector<u64>{0, 3, 6});
  CHECK(ev.ledger().totals().nonscalar_mults == 0);
}

TEST_CASE("raise after projection restores the balanced lift") {
  const u64 p = 7;
  const u32 r = 3;
  const u64 m = checked_pow(p, r);
  for (u64 seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    ClearEval ev(make_ps(p, r, 32, 4, seed));
    std::vector<u64> xs(4);
    for (auto& x : xs) x = rng.uniform(m);
    CipherHandle h = ev.encode_vector(xs);
    CipherHandle back = raise_mod(ev, ev.change_mod_to_p(h));
    REQUIRE(back.tag_exp == r);
    auto got = ev.decode(back);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(got[i] == to_canonical(balanced(xs[i] % p, p), m));
    }
  }
}

TEST_CASE("raise is exact on verdict bits") {
  ClearEval ev(make_ps(5, 4, 32, 2, 99));
  CipherHandle bits = ev.change_mod_to_p(ev.encode_vector({0, 1}));
  CipherHandle up = raise_mod(ev, bits);
  CHECK(ev.decode(up) == std::vector<u64>{0, 1});
  CHECK(up.tag_exp == 4);
}

TEST_CASE("raise rejects non-projected inputs") {
  ClearEval ev(make_ps(5, 3, 16, 1));
  CipherHandle h = ev.encode_vector({12});
  CHECK_THROWS_AS(raise_mod(ev, h), Error);
  CHECK_THROWS_AS(reduce_to_digits(ev, ev.change_mod_to_p(h)), Error);
}

TEST_CASE("depth estimate covers the measured extraction depth") {
  for (auto [p, r] : std::vector<std::pair<u64, u32>>{{3, 2}, {5, 3}, {7, 3}, {5, 4}, {17, 2}}) {
    CAPTURE(p);
    CAPTURE(r);
    u32 budget = estimate_depth(p, r);
    ClearEval ev(make_ps(p, r, budget, 1));
    CipherHandle h = ev.encode_vector({checked_pow(p, r) - 2});
    auto digits = reduce_to_digits(ev, h);
    raise_mod(ev, digits[0]);
    CHECK(ev.ledger().max_depth_consumed() <= budget);

    auto detail = estimate_depth_detail(p, r);
    CHECK(detail.total() == budget);
    CHECK(ev.ledger().max_depth_consumed() <= detail.reduce + detail.raise + detail.slack);
  }
}

TEST_CASE("space-switch stepping consumes the fewest retain evaluations") {
  const u64 p = 5;
  const u32 r = 4;
  std::map<ExtractionStrategy, u64> evals;
  for (ExtractionStrategy s : kAllStrategies) {
    u64 total = 0;
    for (const auto& [name, n] : extraction_eval_counts(s, p, r)) {
      (void)name;
      total += n;
    }
    evals[s] = total;
  }
  CHECK(evals[ExtractionStrategy::SpaceSwitch] == r - 1);
  CHECK(evals[ExtractionStrategy::SpaceSwitch] < evals[ExtractionStrategy::Geelen]);
  CHECK(evals[ExtractionStrategy::Geelen] == evals[ExtractionStrategy::HaleviShoup]);
  CHECK(evals[ExtractionStrategy::ChenHan] == evals[ExtractionStrategy::HaleviShoup]);
}

TEST_CASE("strategy names round-trip") {
  for (ExtractionStrategy s : kAllStrategies) CHECK(strategy_from_name(strategy_name(s)) == s);
  CHECK_THROWS_AS(strategy_from_name("fft"), Error);
}
