// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_REDUCE_HPP
#define SPACESWITCH_REDUCE_HPP

#include <map>
#include <string>
#include <vector>

#include "spaceswitch/eval.hpp"

namespace spaceswitch {

// How the balanced base-p digits of a mod-p^r value are peeled off. All
// variants produce identical digits; they differ in which helper polynomials
// they evaluate and how many times.
//
//  - HaleviShoup: per digit position, a chain of lift-polynomial evaluations
//    refines the digit one p-power of precision at a time; each subsequent
//    position restarts from the original input along an anti-diagonal of
//    subtract-and-divide steps.
//  - ChenHan: like HaleviShoup, but the final refinement of every position is
//    a single digit-retain polynomial instead of the last lift step.
//  - Geelen: every refinement is a digit-retain polynomial applied directly
//    to the position's running value.
//  - SpaceSwitch: one digit-retain evaluation per position at the position's
//    full precision, so the running value can be stepped in place and no
//    anti-diagonal rebuilds are needed. r-1 evaluations total.
enum class ExtractionStrategy { HaleviShoup, ChenHan, Geelen, SpaceSwitch };

const char* strategy_name(ExtractionStrategy s);
ExtractionStrategy strategy_from_name(const std::string& name);

// Splits a tag-r ciphertext into r tag-1 ciphertexts, digit i holding the
// i-th balanced base-p digit (as its canonical residue mod p).
std::vector<CipherHandle> reduce_to_digits(Evaluator& ev, const CipherHandle& x,
                                           ExtractionStrategy strategy = ExtractionStrategy::SpaceSwitch);

// Lifts a tag-1 ciphertext back to tag r: the result is the balanced
// representative of the mod-p value, exact mod p^r. Bits survive unchanged.
CipherHandle raise_mod(Evaluator& ev, const CipherHandle& x);

// Predicted polynomial-evaluation tally of reduce_to_digits, keyed like the
// ledger's per-polynomial counts ("digit_lift", "retain[e]").
std::map<std::string, u64> extraction_eval_counts(ExtractionStrategy s, u64 p, u32 r);

std::string retain_poly_name(u32 e);

// Multiplicative depth budget for the full switch-compare-raise pipeline at
// (p, r). Conservative: per-stage rounding slack is included, so a measured
// run never exceeds it.
struct DepthBreakdown {
  u32 reduce = 0;
  u32 compare = 0;
  u32 aggregate = 0;
  u32 raise = 0;
  u32 slack = 0;
  u32 total() const { return reduce + compare + aggregate + raise + slack; }
};

DepthBreakdown estimate_depth_detail(u64 p, u32 r);
u32 estimate_depth(u64 p, u32 r);

}  // namespace spaceswitch

#endif
