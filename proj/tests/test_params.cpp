// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "spaceswitch/params.hpp"
#include "spaceswitch/reduce.hpp"

using namespace spaceswitch;

TEST_CASE("feasibility is the headroom bound p^r >= 2^(b+1)") {
  CHECK(params_feasible(5, 2, 2));   // 25 >= 8
  CHECK(params_feasible(3, 2, 2));   // 9 >= 8
  CHECK_FALSE(params_feasible(3, 2, 3));  // 9 < 16
  CHECK(params_feasible(23, 2, 8));  // 529 >= 512
  // One digit short of the headroom bit: 343 and 289 both miss 512.
  CHECK_FALSE(params_feasible(7, 3, 8));
  CHECK_FALSE(params_feasible(17, 2, 8));
  CHECK(params_feasible(7, 4, 8));
  CHECK(params_feasible(17, 3, 8));

  CHECK_THROWS_AS(params_feasible(5, 2, 0), Error);
  CHECK_THROWS_AS(params_feasible(5, 2, 63), Error);
}

TEST_CASE("measured candidate costs are stable pins") {
  auto c54 = measure_compare_cost(5, 4);
  CHECK(c54.modulus == 625);
  CHECK(c54.nonscalar == 40);

  auto c75 = measure_compare_cost(7, 5);
  CHECK(c75.modulus == 16807);
  CHECK(c75.nonscalar == 61);

  auto c232 = measure_compare_cost(23, 2);
  CHECK(c232.modulus == 529);
  CHECK(c232.nonscalar == 38);
  CHECK(c232.depth > 0);
}

TEST_CASE("ranking is feasible, sorted, and led by the cheapest pipeline") {
  for (u32 bw : {8u, 12u}) {
    CAPTURE(bw);
    auto ranked = rank_candidates(bw);
    REQUIRE(!ranked.empty());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      CHECK(params_feasible(ranked[i].p, ranked[i].r, bw));
      CHECK(ranked[i].modulus == checked_pow(ranked[i].p, ranked[i].r));
      if (i > 0) CHECK(ranked[i - 1].nonscalar <= ranked[i].nonscalar);
    }
  }
  CHECK(rank_candidates(8).front().p == 23);
  CHECK(rank_candidates(8).front().r == 2);
  CHECK(rank_candidates(12).front().p == 7);
  CHECK(rank_candidates(12).front().r == 5);
}

TEST_CASE("the single-digit baseline joins the ranking only at desk scale") {
  auto r8 = rank_candidates(8);
  bool has_direct = false;
  for (const auto& c : r8) has_direct |= (c.r == 1 && c.p == 521);
  CHECK(has_direct);

  // Smallest prime past 2^15 is far beyond the polynomial-build cutoff.
  auto r16 = rank_candidates(16);
  for (const auto& c : r16) CHECK(c.r >= 2);
}

TEST_CASE("selection is deterministic and leaves the requested headroom") {
  auto a = select_params(8, 5, 3);
  auto b = select_params(8, 5, 3);
  CHECK(a.p == b.p);
  CHECK(a.r == b.r);
  CHECK(a.levels == b.levels);
  CHECK(a.seed == 3);

  CHECK(a.p == 23);
  CHECK(a.r == 2);
  CHECK(a.levels == estimate_depth(23, 2) + 5);

  auto w12 = select_params(12, 0);
  CHECK(w12.p == 7);
  CHECK(w12.r == 5);
  CHECK(w12.levels == estimate_depth(7, 5));
}

TEST_CASE("every supported bitwidth selects something feasible") {
  for (u32 bw = 4; bw <= 24; bw += 4) {
    CAPTURE(bw);
    auto ps = select_params(bw, 2);
    CHECK(params_feasible(ps.p, ps.r, bw));
    CHECK(is_prime(ps.p));
    CHECK((ps.p & 1) == 1);
    CHECK(ps.levels >= estimate_depth(ps.p, ps.r) + 2);
    CHECK(ps.slots == 1);
  }
}

TEST_CASE("bitwidths outside the desk-scale window are rejected") {
  CHECK_THROWS_AS(select_params(3, 0), Error);
  CHECK_THROWS_AS(select_params(25, 0), Error);
}
