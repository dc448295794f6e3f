// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_PARAMS_HPP
#define SPACESWITCH_PARAMS_HPP

#include <vector>

#include "spaceswitch/eval.hpp"

namespace spaceswitch {

// Dry-run cost of one raised less-than comparison at (p, r), measured on the
// cleartext backend. Deterministic; memoized across calls.
struct CandidateCost {
  u64 p = 0;
  u32 r = 0;
  u64 modulus = 0;        // p^r
  u64 nonscalar = 0;      // metered ciphertext-ciphertext multiplications
  u32 depth = 0;          // metered multiplicative depth
};

// Comparing two b-bit values needs every difference to stay strictly inside
// the balanced window, hence the +1: p^r >= 2^{b+1}.
bool params_feasible(u64 p, u32 r, u32 bitwidth);

CandidateCost measure_compare_cost(u64 p, u32 r);

// Feasible desk-scale candidates for a bitwidth, cheapest first. One tower
// per odd prime p <= 257: the smallest r >= 2 with p^r over the headroom
// floor (deeper towers strictly cost more), plus the smallest feasible
// single-digit prime when its comparison polynomial is still buildable at
// desk scale. Ordering: nonscalar count, then depth, then p^r, then p.
std::vector<CandidateCost> rank_candidates(u32 bitwidth);

// Cheapest measured (p, r) for the bitwidth, with enough levels for the
// comparison pipeline plus depth_budget extra for downstream work.
// Requires 4 <= bitwidth <= 24.
ParamSet select_params(u32 bitwidth, u32 depth_budget, u64 seed = 1);

}  // namespace spaceswitch

#endif
