// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_INTERP_HPP
#define SPACESWITCH_INTERP_HPP

#include <optional>
#include <vector>

#include "spaceswitch/common.hpp"

namespace spaceswitch {

// Polynomial over Z_modulus, coeffs[i] is the x^i coefficient, canonical form.
struct DensePoly {
  u64 modulus = 0;
  std::vector<u64> coeffs;

  static DensePoly zero(u64 m) { return DensePoly{m, {}}; }
  static DensePoly from_signed(u64 m, const std::vector<i64>& c);

  std::size_t degree() const;  // 0 for the zero polynomial
  void trim();
  u64 eval(u64 x) const;
  u64 coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }

  // Coefficient-wise reduction; new_mod must divide modulus.
  DensePoly reduced_to(u64 new_mod) const;

  bool is_zero() const;
  bool odd_powers_only() const;
  bool even_powers_only() const;
};

// Indicator of "x == 0" on Z_p: 1 - x^(p-1).
DensePoly build_F_EQ(u64 p);

// Indicator of "x is negative" on balanced Z_p, i.e. 1 exactly when the
// balanced representative of x lies in [-(p-1)/2, -1]. Closed form:
//   (p+1)/2 * x^(p-1) + sum over odd i of c_i x^i,
//   c_i = sum_{j=1..(p-1)/2} j^(p-1-i).
DensePoly build_F_LT(u64 p);

// Interpolant of an arbitrary table on Z_p: P(X) = sum_a f(a) (1 - (X-a)^(p-1)).
DensePoly build_interp(u64 p, const std::vector<u64>& table);

// Lifting polynomial for one digit: degree <= p, and for every t in [1, e-1],
// every balanced digit z0 and every z1: F(z0 + p^t z1) == z0 (mod p^(t+1)).
// Built once per (p, e) and cached.
DensePoly build_F_lift(u64 p, u32 e);

// Digit-retain polynomial: G(z0 + p z1) == z0 (mod p^e) for balanced z0.
// Degree <= (e-1)(p-1) + 1; returned in odd-symmetrized form. Cached.
DensePoly build_G(u64 p, u32 e);

// Solve A x = b over Z_{p^e}. Pivots on the entry of globally minimal p-adic
// valuation, so non-unit pivots are handled; free variables are set to zero.
// Returns nullopt when the system is inconsistent.
std::optional<std::vector<u64>> solve_mod_prime_power(std::vector<std::vector<u64>> A,
                                                      std::vector<u64> b, u64 p, u32 e);

struct VerifyReport {
  bool ok = false;
  u64 checked = 0;
  bool exhaustive = false;
  u64 first_bad_input = 0;  // meaningful only when !ok
};

// Domain size at or below which verification enumerates every input. Larger
// domains get the same budget as a structured-plus-random sample.
inline constexpr u64 kExhaustiveVerifyLimit = 200'000;
inline constexpr u64 kSampledVerifyCount = 200'000;

VerifyReport verify_digit_retain(const DensePoly& g, u64 p, u32 e, u64 seed = 1);
VerifyReport verify_lift(const DensePoly& f, u64 p, u32 e, u64 seed = 1);

struct ParityForm {
  enum class Kind { odd, even, mixed };
  Kind kind = Kind::mixed;
  // For odd: f(x) = x * h(x^2); for even: f(x) = h(x^2); unset for mixed.
  DensePoly h;
};

ParityForm parity_decompose(const DensePoly& f);

}  // namespace spaceswitch

#endif
