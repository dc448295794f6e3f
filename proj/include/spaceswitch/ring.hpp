// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_RING_HPP
#define SPACESWITCH_RING_HPP

#include <vector>

#include "spaceswitch/common.hpp"

namespace spaceswitch {

// Value in Z_mod, canonical representative in [0, mod).
struct Residue {
  u64 val = 0;
  u64 mod = 0;

  static Residue make(u64 v, u64 m);
  static Residue from_signed(i64 v, u64 m);

  Residue add(const Residue& o) const;
  Residue sub(const Residue& o) const;
  Residue mul(const Residue& o) const;
  Residue pow(u64 e) const;
  Residue inv() const;
  Residue neg() const;

  // Representative in (-mod/2, mod/2].
  i64 balanced_rep() const;

  bool operator==(const Residue& o) const { return val == o.val && mod == o.mod; }
};

// Balanced base-p digits of x mod p^r: x == sum d_i p^i (mod p^r), |d_i| <= (p-1)/2.
// p must be odd, so the balanced digit set is symmetric and unique.
std::vector<i64> base_p_digits(u64 x, u64 p, u32 r);

// Horner evaluation of a coefficient vector over Z_m (coeffs[i] is the x^i term).
u64 poly_eval_clear(const std::vector<u64>& coeffs, u64 x, u64 m);

// Element of Z_q[x] / (x^n + 1), n a power of two. Coefficients canonical in [0, q).
class RingElem {
 public:
  RingElem() = default;
  RingElem(std::size_t n, BigInt q);

  std::size_t n() const { return coeffs_.size(); }
  const BigInt& q() const { return q_; }
  const BigInt& operator[](std::size_t i) const { return coeffs_[i]; }
  void set(std::size_t i, const BigInt& v);

  RingElem add(const RingElem& o) const;
  RingElem sub(const RingElem& o) const;
  RingElem neg() const;
  RingElem mul(const RingElem& o) const;

  // Negacyclic product against a small-coefficient polynomial (signed, not
  // reduced mod q). Same result as promoting d to a RingElem, much cheaper.
  RingElem mul_small(const std::vector<i64>& d) const;

  RingElem scaled(const BigInt& k) const;

  // Reinterpret under a divisor modulus (used when a key at the top modulus is
  // consumed at a lower one; requires new_q | q).
  RingElem reduced_to(const BigInt& new_q) const;

  // Exact coefficient-wise division; every coefficient of the *balanced* form
  // must be divisible by d. Result lives mod q / d.
  RingElem exact_div_balanced(const BigInt& d) const;

  BigInt max_balanced_abs() const;

  bool operator==(const RingElem& o) const { return q_ == o.q_ && coeffs_ == o.coeffs_; }

 private:
  void check_compat(const RingElem& o) const;
  BigInt q_;
  std::vector<BigInt> coeffs_;
};

// Uniform element of R_q.
RingElem sample_uniform(std::size_t n, const BigInt& q, Rng& rng);

// Ternary vector with exactly `weight` nonzero entries, signs uniform.
std::vector<i64> sample_ternary(std::size_t n, std::size_t weight, Rng& rng);

// Discrete Gaussian by rejection, sigma fixed by the caller, tails cut at 6 sigma.
std::vector<i64> sample_gaussian(std::size_t n, double sigma, Rng& rng);

}  // namespace spaceswitch

#endif
