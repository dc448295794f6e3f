// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_PS_EVAL_HPP
#define SPACESWITCH_PS_EVAL_HPP

#include <string>

#include "spaceswitch/eval.hpp"
#include "spaceswitch/interp.hpp"

namespace spaceswitch {

// Memoized powers of one ciphertext. power(e) returns x^e, building missing
// entries one nonscalar mult at a time: squaring when x^(e/2) is present,
// otherwise splitting e greedily against the largest cached exponent.
class PowerCache {
 public:
  PowerCache(Evaluator& ev, const CipherHandle& x);

  CipherHandle power(u64 e);
  bool contains(u64 e) const { return pw_.count(e) != 0; }
  Evaluator& evaluator() { return *ev_; }

 private:
  Evaluator* ev_;
  std::map<u64, CipherHandle> pw_;
};

// Baby-step/giant-step polynomial evaluation (Paterson-Stockmeyer shape) with
// an odd/even fast path: an odd f evaluates as x * H(x^2) and an even one as
// H(x^2), halving the effective degree. Constant chunks multiply into giant
// powers as scalars and all-zero chunks are skipped, so the nonscalar count
// tracks the polynomial's support, not just its degree.
//
// The polynomial's modulus must equal the handle's plaintext modulus.
CipherHandle ps_eval(Evaluator& ev, const DensePoly& f, const CipherHandle& x,
                     const std::string& poly_name = "");

// Same, but reusing (and extending) a caller-owned power cache, so several
// polynomials of the same input share their power ladder.
CipherHandle ps_eval_cached(const DensePoly& f, PowerCache& cache, const std::string& poly_name = "");

// Documented ceiling for the nonscalar mults of one ps_eval call.
u64 ps_nonscalar_bound(u64 degree);

}  // namespace spaceswitch

#endif
