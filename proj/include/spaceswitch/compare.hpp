// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_COMPARE_HPP
#define SPACESWITCH_COMPARE_HPP

#include <string>

#include "spaceswitch/reduce.hpp"

namespace spaceswitch {

enum class CmpOp { lt, le, gt, ge, eq, neq };

const char* cmp_op_name(CmpOp op);
CmpOp cmp_op_from_name(const std::string& name);

struct CompareOptions {
  ExtractionStrategy strategy = ExtractionStrategy::SpaceSwitch;
  // One power ladder per digit shared between the less-than and equality
  // polynomials. Disable to measure the cost of evaluating them separately.
  bool share_power_cache = true;
  // Lift the verdict bit back to the full modulus p^r so it can be used as a
  // multiplicative mask. Disable to keep the bit in the digit space.
  bool raise_result = true;
};

// Order comparison of two mod-p^r ciphertexts by digit-wise reduction.
// Exact whenever the integer difference of the operands has magnitude at
// most (p^r - 1)/2; outside that window the difference wraps. The result is
// a 0/1 mask, at tag r by default (see CompareOptions::raise_result).
CipherHandle compare(Evaluator& ev, CmpOp op, const CipherHandle& a, const CipherHandle& b,
                     const CompareOptions& opt = {});

// Same, with a plaintext right-hand side.
CipherHandle compare_const(Evaluator& ev, CmpOp op, const CipherHandle& a, u64 k,
                           const CompareOptions& opt = {});

}  // namespace spaceswitch

#endif
