// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/compare.hpp"

using namespace spaceswitch;

namespace {

const std::vector<CmpOp> kAllOps = {CmpOp::lt, CmpOp::le, CmpOp::gt,
                                    CmpOp::ge, CmpOp::eq, CmpOp::neq};

ParamSet make_ps(u64 p, u32 r, u32 levels, std::size_t slots, u64 seed = 7) {
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = levels;
  ps.slots = slots;
  ps.seed = seed;
  return ps;
}

bool oracle(CmpOp op, u64 a, u64 b) {
  switch (op) {
    case CmpOp::lt:
      return a < b;
    case CmpOp::le:
      return a <= b;
    case CmpOp::gt:
      return a > b;
    case CmpOp::ge:
      return a >= b;
    case CmpOp::eq:
      return a == b;
    case CmpOp::neq:
      return a != b;
  }
  return false;
}

// All ordered pairs within the exactness window |a-b| <= (m-1)/2.
std::pair<std::vector<u64>, std::vector<u64>> valid_pairs(u64 m) {
  std::vector<u64> as, bs;
  u64 w = (m - 1) / 2;
  for (u64 a = 0; a < m; ++a) {
    u64 lo = a > w ? a - w : 0;
    u64 hi = a + w < m - 1 ? a + w : m - 1;
    for (u64 b = lo; b <= hi; ++b) {
      as.push_back(a);
      bs.push_back(b);
    }
  }
  return {as, bs};
}

}  // namespace

TEST_CASE("all six comparisons match integer semantics on every valid pair") {
  for (auto [p, r] : std::vector<std::pair<u64, u32>>{{3, 2}, {5, 2}, {7, 2}, {5, 3}}) {
    const u64 m = checked_pow(p, r);
    auto [as, bs] = valid_pairs(m);
    for (CmpOp op : kAllOps) {
      CAPTURE(p);
      CAPTURE(r);
      CAPTURE(cmp_op_name(op));
      ClearEval ev(make_ps(p, r, 64, as.size()));
      CipherHandle ha = ev.encode_vector(as);
      CipherHandle hb = ev.encode_vector(bs);
      auto got = ev.decode(compare(ev, op, ha, hb));
      u64 bad = 0;
      for (std::size_t i = 0; i < as.size(); ++i) {
        if (got[i] != (oracle(op, as[i], bs[i]) ? 1u : 0u)) ++bad;
      }
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("constant comparisons agree with the two-ciphertext form") {
  const u64 p = 7;
  const u32 r = 3;
  const u64 m = checked_pow(p, r);
  Rng rng(31337);
  ClearEval ev(make_ps(p, r, 64, 32));
  for (int round = 0; round < 4; ++round) {
    u64 k = rng.uniform(m);
    std::vector<u64> xs(32);
    // keep |x - k| inside the window
    u64 w = (m - 1) / 2;
    for (auto& x : xs) {
      u64 lo = k > w ? k - w : 0;
      u64 hi = k + w < m - 1 ? k + w : m - 1;
      x = lo + rng.uniform(hi - lo + 1);
    }
    CipherHandle hx = ev.encode_vector(xs);
    CipherHandle hk = ev.encode_vector(std::vector<u64>(32, k));
    for (CmpOp op : kAllOps) {
      auto via_const = ev.decode(compare_const(ev, op, hx, k));
      auto via_pair = ev.decode(compare(ev, op, hx, hk));
      CHECK(via_const == via_pair);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(via_const[i] == (oracle(op, xs[i], k) ? 1u : 0u));
      }
    }
  }
  CHECK_THROWS_AS(compare_const(ev, CmpOp::lt, ev.encode_vector({1}), m), Error);
}

TEST_CASE("verdicts do not depend on the extraction strategy") {
  const u64 p = 5;
  const u32 r = 3;
  const u64 m = 125;
  Rng rng(4);
  std::vector<u64> as(64), bs(64);
  for (std::size_t i = 0; i < as.size(); ++i) {
    as[i] = rng.uniform(m);
    u64 w = (m - 1) / 2;
    u64 lo = as[i] > w ? as[i] - w : 0;
    u64 hi = as[i] + w < m - 1 ? as[i] + w : m - 1;
    bs[i] = lo + rng.uniform(hi - lo + 1);
  }
  std::vector<std::vector<u64>> results;
  for (ExtractionStrategy s :
       {ExtractionStrategy::HaleviShoup, ExtractionStrategy::ChenHan, ExtractionStrategy::Geelen,
        ExtractionStrategy::SpaceSwitch}) {
    ClearEval ev(make_ps(p, r, 128, as.size()));
    CompareOptions opt;
    opt.strategy = s;
    results.push_back(ev.decode(compare(ev, CmpOp::lt, ev.encode_vector(as), ev.encode_vector(bs), opt)));
  }
  for (std::size_t i = 1; i < results.size(); ++i) CHECK(results[i] == results[0]);
}

TEST_CASE("nonscalar totals of the raised less-than pipeline") {
  // digit polynomials + per-digit predicates + aggregation + raise
  const std::vector<std::tuple<u64, u32, u64>> expected = {
      {3, 2, 7},  {5, 2, 14}, {7, 2, 17}, {17, 2, 31},
      {5, 3, 27}, {7, 3, 31}, {17, 3, 55}, {5, 4, 40},
  };
  for (auto [p, r, want] : expected) {
    CAPTURE(p);
    CAPTURE(r);
    ClearEval ev(make_ps(p, r, 64, 1));
    CipherHandle a = ev.encode_vector({1});
    CipherHandle b = ev.encode_vector({2});
    compare(ev, CmpOp::lt, a, b);
    CHECK(ev.ledger().totals().nonscalar_mults == want);
  }
}

TEST_CASE("stage attribution of the pipeline") {
  const u64 p = 5;
  const u32 r = 3;
  ClearEval ev(make_ps(p, r, 64, 1));
  compare(ev, CmpOp::lt, ev.encode_vector({7}), ev.encode_vector({99}));
  auto st = ev.ledger().per_stage();
  CHECK(st["aggregation"].nonscalar_mults == 2 * r - 3);
  CHECK(st["reduction"].nonscalar_mults > 0);
  CHECK(st["digit-compare"].nonscalar_mults > 0);
  CHECK(st["raise"].nonscalar_mults > 0);

  ClearEval ev2(make_ps(p, r, 64, 1));
  compare(ev2, CmpOp::eq, ev2.encode_vector({7}), ev2.encode_vector({99}));
  CHECK(ev2.ledger().per_stage()["aggregation"].nonscalar_mults == r - 1);
}

TEST_CASE("sharing the power ladder between the digit predicates saves mults") {
  const u64 p = 17;
  const u32 r = 2;
  u64 shared, separate;
  {
    ClearEval ev(make_ps(p, r, 64, 1));
    compare(ev, CmpOp::lt, ev.encode_vector({5}), ev.encode_vector({9}));
    shared = ev.ledger().totals().nonscalar_mults;
  }
  {
    ClearEval ev(make_ps(p, r, 64, 1));
    CompareOptions opt;
    opt.share_power_cache = false;
    compare(ev, CmpOp::lt, ev.encode_vector({5}), ev.encode_vector({9}), opt);
    separate = ev.ledger().totals().nonscalar_mults;
  }
  CHECK(shared < separate);
}

TEST_CASE("unraised verdicts stay in the digit space") {
  ClearEval ev(make_ps(5, 3, 64, 3));
  CompareOptions opt;
  opt.raise_result = false;
  CipherHandle a = ev.encode_vector({10, 20, 30});
  CipherHandle b = ev.encode_vector({20, 20, 10});
  CipherHandle v = compare(ev, CmpOp::lt, a, b, opt);
  CHECK(v.tag_exp == 1);
  CHECK(ev.decode(v) == std::vector<u64>{1, 0, 0});
}

TEST_CASE("measured depth stays within the estimate") {
  for (auto [p, r] : std::vector<std::pair<u64, u32>>{{5, 3}, {7, 3}, {17, 2}, {5, 4}}) {
    CAPTURE(p);
    CAPTURE(r);
    u32 budget = estimate_depth(p, r);
    ClearEval ev(make_ps(p, r, budget, 2));
    CipherHandle a = ev.encode_vector({3, 9});
    CipherHandle b = ev.encode_vector({10, 4});
    CipherHandle v = compare(ev, CmpOp::lt, a, b);  // throws if the budget is short
    CHECK(ev.decode(v) == std::vector<u64>{1, 0});
    CHECK(ev.ledger().max_depth_consumed() <= budget);
  }
}

TEST_CASE("operands must carry the full tag") {
  ClearEval ev(make_ps(5, 3, 32, 1));
  CipherHandle a = ev.encode_vector({3});
  CipherHandle low = ev.change_mod_to_p(a);
  CHECK_THROWS_AS(compare(ev, CmpOp::lt, low, a), Error);
  CHECK_THROWS_AS(compare_const(ev, CmpOp::lt, low, 2), Error);
}

TEST_CASE("op names round-trip") {
  for (CmpOp op : kAllOps) CHECK(cmp_op_from_name(cmp_op_name(op)) == op);
  CHECK_THROWS_AS(cmp_op_from_name("spaceship"), Error);
}
