// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

// The cleartext and lattice backends implement one evaluator contract.
// These tests drive both with identical programs and demand identical
// decoded outputs, so any semantic drift between them is caught here.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <utility>
#include <vector>

#include "spaceswitch/bgv.hpp"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/compare.hpp"
#include "spaceswitch/reduce.hpp"

using namespace spaceswitch;

namespace {

ParamSet single_slot(u64 p, u32 r, u32 levels, u64 seed) {
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = levels;
  ps.slots = 1;
  ps.seed = seed;
  return ps;
}

}  // namespace

TEST_CASE("backends agree on random straight-line arithmetic") {
  u64 p = 5;
  u32 r = 3;
  u64 m = checked_pow(p, r);
  auto ps = single_slot(p, r, 4, 31);
  ClearEval clear(ps);
  BgvEval bgv(ps);
  Rng rng(2024);
  for (int prog = 0; prog < 250; ++prog) {
    u64 xa = rng.uniform(m), xb = rng.uniform(m);
    auto ca = clear.encode_vector({xa});
    auto cb = clear.encode_vector({xb});
    auto ga = bgv.encode_vector({xa});
    auto gb = bgv.encode_vector({xb});
    for (int step = 0; step < 4; ++step) {
      u64 op = rng.uniform(5);
      i64 k = static_cast<i64>(rng.uniform(2 * m)) - static_cast<i64>(m);
      switch (op) {
        case 0:
          ca = clear.add(ca, cb);
          ga = bgv.add(ga, gb);
          break;
        case 1:
          ca = clear.sub(ca, cb);
          ga = bgv.sub(ga, gb);
          break;
        case 2:
          ca = clear.mul(ca, cb);
          ga = bgv.mul(ga, gb);
          break;
        case 3:
          ca = clear.add_plain(ca, k);
          ga = bgv.add_plain(ga, k);
          break;
        default:
          ca = clear.mul_plain(ca, k);
          ga = bgv.mul_plain(ga, k);
          break;
      }
      CHECK(ca.level == ga.level);
      CHECK(ca.tag_exp == ga.tag_exp);
    }
    CHECK(clear.decode(ca)[0] == bgv.decode(ga)[0]);
  }
}

TEST_CASE("backends agree on digit extraction for every strategy") {
  u64 p = 5;
  u32 r = 3;
  u64 m = checked_pow(p, r);
  auto ps = single_slot(p, r, estimate_depth(p, r), 32);
  ClearEval clear(ps);
  BgvEval bgv(ps);
  Rng rng(77);
  for (auto strat : {ExtractionStrategy::HaleviShoup, ExtractionStrategy::ChenHan,
                     ExtractionStrategy::Geelen, ExtractionStrategy::SpaceSwitch}) {
    for (int i = 0; i < 4; ++i) {
      u64 x = rng.uniform(m);
      auto cd = reduce_to_digits(clear, clear.encode_vector({x}), strat);
      auto gd = reduce_to_digits(bgv, bgv.encode_vector({x}), strat);
      REQUIRE(cd.size() == gd.size());
      for (std::size_t j = 0; j < cd.size(); ++j) {
        CHECK(clear.decode(cd[j])[0] == bgv.decode(gd[j])[0]);
        CHECK(cd[j].level == gd[j].level);
        CHECK(cd[j].tag_exp == gd[j].tag_exp);
      }
    }
  }
}

TEST_CASE("backends agree on comparison verdicts and raised encodings") {
  std::vector<std::pair<u64, u32>> sets{{5, 2}, {7, 2}};
  for (auto [p, r] : sets) {
    u64 m = checked_pow(p, r);
    i64 half = static_cast<i64>((m - 1) / 2);
    auto ps = single_slot(p, r, estimate_depth(p, r), p * 10 + r);
    ClearEval clear(ps);
    BgvEval bgv(ps);
    Rng rng(p * 7 + r);
    for (int i = 0; i < 10; ++i) {
      u64 a = rng.uniform(m);
      i64 diff = static_cast<i64>(rng.uniform(static_cast<u64>(2 * half + 1))) - half;
      u64 b = to_canonical(static_cast<i64>(a) - diff, m);
      CmpOp op = static_cast<CmpOp>(rng.uniform(6));
      auto cv = compare(clear, op, clear.encode_vector({a}), clear.encode_vector({b}));
      auto gv = compare(bgv, op, bgv.encode_vector({a}), bgv.encode_vector({b}));
      CHECK(clear.decode(cv)[0] == bgv.decode(gv)[0]);
      CHECK(cv.level == gv.level);
      CHECK(cv.tag_exp == gv.tag_exp);
    }
  }
}

TEST_CASE("backends count identical ciphertext operations for one pipeline") {
  u64 p = 5;
  u32 r = 2;
  auto ps = single_slot(p, r, estimate_depth(p, r), 55);
  ClearEval clear(ps);
  BgvEval bgv(ps);
  auto run = [](Evaluator& ev) {
    ev.ledger().reset();
    auto v = compare(ev, CmpOp::lt, ev.encode_vector({3}), ev.encode_vector({17}));
    (void)v;
    return ev.ledger().totals();
  };
  auto ct = run(clear);
  auto gt = run(bgv);
  CHECK(ct.nonscalar_mults == gt.nonscalar_mults);
  CHECK(ct.scalar_mults == gt.scalar_mults);
  CHECK(ct.additions == gt.additions);
}
