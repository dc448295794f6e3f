// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/params.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/compare.hpp"
#include "spaceswitch/reduce.hpp"

namespace spaceswitch {

namespace {

// Largest digit base we interpolate comparison polynomials for. Matches the
// largest single-prime table entry exercised by the certificate harness.
constexpr u64 kMaxDigitPrime = 257;

// Above this, building the degree-(p-1) comparison polynomial for a
// single-digit baseline stops being desk-scale; multi-digit candidates
// dominate long before that anyway.
constexpr u64 kMaxDirectPrime = 10000;

// Candidates larger than 64x the feasibility floor never win the count
// ranking; the window keeps the enumeration small.
constexpr u32 kWindowBits = 6;

std::mutex cache_mu;
std::map<std::pair<u64, u32>, CandidateCost> cost_cache;

}  // namespace

bool params_feasible(u64 p, u32 r, u32 bitwidth) {
  require(bitwidth >= 1 && bitwidth <= 62, Errc::invalid_argument, "params_feasible: bad bitwidth");
  u64 pr = checked_pow(p, r);
  return (BigInt(pr) >> (bitwidth + 1)) >= 1;
}

CandidateCost measure_compare_cost(u64 p, u32 r) {
  {
    std::lock_guard<std::mutex> lk(cache_mu);
    auto it = cost_cache.find({p, r});
    if (it != cost_cache.end()) return it->second;
  }
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  // Dry-run ceiling, not a recommendation: greedy power reuse on large-p
  // digit polynomials can run well past the estimate, and cleartext levels
  // cost nothing. The measured depth lands in CandidateCost.
  ps.levels = 200;
  ps.slots = 1;
  ps.seed = 1;
  ClearEval ev(ps);
  auto a = ev.encode_vector({0});
  auto b = ev.encode_vector({1});
  ev.ledger().reset();
  (void)compare(ev, CmpOp::lt, a, b);
  CandidateCost c;
  c.p = p;
  c.r = r;
  c.modulus = checked_pow(p, r);
  c.nonscalar = ev.ledger().totals().nonscalar_mults;
  c.depth = ev.ledger().max_depth_consumed();
  std::lock_guard<std::mutex> lk(cache_mu);
  cost_cache.emplace(std::make_pair(p, r), c);
  return c;
}

std::vector<CandidateCost> rank_candidates(u32 bitwidth) {
  BigInt floor_m = BigInt(1) << (bitwidth + 1);
  BigInt cap = floor_m << kWindowBits;
  std::vector<CandidateCost> out;
  u64 best = UINT64_MAX;

  for (u64 p = 3; p <= kMaxDigitPrime; p += 2) {
    if (!is_prime(p)) continue;
    BigInt pr = p;
    u32 r = 1;
    while (pr < floor_m) {
      pr *= p;
      ++r;
    }
    // Only the smallest feasible tower per prime can win: a deeper tower
    // runs every polynomial the shallower one does and then some.
    if (r < 2 || pr >= cap) continue;
    // The (p, 2) pipeline is a strict subset of any (p, r > 2) one, and its
    // polynomials are cheap to build, so it prunes hopeless primes before
    // their large retain polynomials are ever constructed.
    if (r > 2 && measure_compare_cost(p, 2).nonscalar >= best) continue;
    CandidateCost c = measure_compare_cost(p, r);
    out.push_back(c);
    best = std::min(best, c.nonscalar);
  }

  // Single-digit baseline: only the smallest feasible prime can win, and only
  // while its interpolation polynomial stays cheap to build.
  for (BigInt q = floor_m + 1; q <= BigInt(kMaxDirectPrime); ++q) {
    u64 qq = q.convert_to<u64>();
    if (qq % 2 == 1 && is_prime(qq)) {
      out.push_back(measure_compare_cost(qq, 1));
      break;
    }
  }

  std::sort(out.begin(), out.end(), [](const CandidateCost& a, const CandidateCost& b) {
    if (a.nonscalar != b.nonscalar) return a.nonscalar < b.nonscalar;
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.modulus != b.modulus) return a.modulus < b.modulus;
    return a.p < b.p;
  });
  return out;
}

ParamSet select_params(u32 bitwidth, u32 depth_budget, u64 seed) {
  require(bitwidth >= 4 && bitwidth <= 24, Errc::invalid_argument,
          "select_params: bitwidth must lie in [4, 24]");
  auto ranked = rank_candidates(bitwidth);
  require(!ranked.empty(), Errc::infeasible_params,
          "select_params: no feasible (p, r) in the desk-scale table for bitwidth " +
              std::to_string(bitwidth));
  const CandidateCost& best = ranked.front();
  ParamSet ps;
  ps.p = best.p;
  ps.r = best.r;
  ps.levels = estimate_depth(best.p, best.r) + depth_budget;
  ps.slots = 1;
  ps.seed = seed;
  return ps;
}

}  // namespace spaceswitch
