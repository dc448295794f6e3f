// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/interp.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace spaceswitch {

DensePoly DensePoly::from_signed(u64 m, const std::vector<i64>& c) {
  DensePoly out{m, {}};
  out.coeffs.reserve(c.size());
  for (i64 v : c) out.coeffs.push_back(to_canonical(v, m));
  out.trim();
  return out;
}

std::size_t DensePoly::degree() const {
  for (std::size_t i = coeffs.size(); i-- > 0;)
    if (coeffs[i] != 0) return i;
  return 0;
}

void DensePoly::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

u64 DensePoly::eval(u64 x) const {
  u64 acc = 0;
  x %= modulus;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = addmod(mulmod(acc, x, modulus), coeffs[i] % modulus, modulus);
  return acc;
}

DensePoly DensePoly::reduced_to(u64 new_mod) const {
  require(new_mod >= 2 && modulus % new_mod == 0, Errc::invalid_argument,
          "DensePoly: target modulus must divide current");
  DensePoly out{new_mod, coeffs};
  for (auto& c : out.coeffs) c %= new_mod;
  out.trim();
  return out;
}

bool DensePoly::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](u64 c) { return c == 0; });
}

bool DensePoly::odd_powers_only() const {
  for (std::size_t i = 0; i < coeffs.size(); i += 2)
    if (coeffs[i] != 0) return false;
  return true;
}

bool DensePoly::even_powers_only() const {
  for (std::size_t i = 1; i < coeffs.size(); i += 2)
    if (coeffs[i] != 0) return false;
  return true;
}

DensePoly build_F_EQ(u64 p) {
  require_odd_prime(p);
  DensePoly f{p, std::vector<u64>(p, 0)};
  f.coeffs[0] = 1;
  f.coeffs[p - 1] = p - 1;
  return f;
}

DensePoly build_F_LT(u64 p) {
  require_odd_prime(p);
  static std::map<u64, DensePoly> cache;  // the coefficient sums are quadratic in p
  if (auto it = cache.find(p); it != cache.end()) return it->second;
  DensePoly f{p, std::vector<u64>(p, 0)};
  f.coeffs[p - 1] = (p + 1) / 2;
  for (u64 i = 1; i + 1 < p; i += 2) {
    u64 c = 0;
    for (u64 j = 1; j <= (p - 1) / 2; ++j) c = addmod(c, powmod(j, p - 1 - i, p), p);
    f.coeffs[i] = c;
  }
  f.trim();
  cache.emplace(p, f);
  return f;
}

DensePoly build_interp(u64 p, const std::vector<u64>& table) {
  require_odd_prime(p);
  require(table.size() == p, Errc::invalid_argument, "build_interp: table must have p entries");
  DensePoly out{p, std::vector<u64>(p, 0)};
  std::vector<u64> binom(p, 0);  // C(p-1, k)
  binom[0] = 1;
  for (u64 k = 1; k < p; ++k) binom[k] = mulmod(mulmod(binom[k - 1], p - k, p), invmod(k, p), p);
  std::vector<u64> pw(p);
  for (u64 a = 0; a < p; ++a) {
    u64 fa = table[a] % p;
    if (fa == 0) continue;
    out.coeffs[0] = addmod(out.coeffs[0], fa, p);
    u64 na = (p - a) % p;  // -a
    pw[0] = 1;
    for (u64 k = 1; k < p; ++k) pw[k] = mulmod(pw[k - 1], na, p);
    for (u64 k = 0; k < p; ++k) {
      u64 term = mulmod(fa, mulmod(binom[k], pw[p - 1 - k], p), p);
      out.coeffs[k] = submod(out.coeffs[k], term, p);
    }
  }
  out.trim();
  return out;
}

namespace {

u64 valuation(u64 x, u64 p, u32 e) {
  if (x == 0) return e;
  u64 v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

std::optional<std::vector<u64>> solve_mod_prime_power(std::vector<std::vector<u64>> A,
                                                      std::vector<u64> b, u64 p, u32 e) {
  u64 m = checked_pow(p, e);
  std::size_t rows = A.size();
  require(rows == b.size(), Errc::invalid_argument, "solver: shape mismatch");
  std::size_t cols = rows ? A[0].size() : 0;
  for (auto& row : A)
    require(row.size() == cols, Errc::invalid_argument, "solver: ragged matrix");

  std::vector<bool> row_used(rows, false), col_used(cols, false);
  // pivot list in assignment order: (row, col, valuation)
  std::vector<std::tuple<std::size_t, std::size_t, u64>> pivots;

  for (;;) {
    // Globally minimal p-adic valuation among unused rows / unassigned columns.
    // Keeping the pivot minimal guarantees every eliminated entry is divisible
    // by it, which is what makes elimination exact over Z_{p^e}.
    u64 best_v = e;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j] || A[i][j] == 0) continue;
        u64 v = valuation(A[i][j], p, e);
        if (v < best_v) {
          best_v = v;
          bi = i;
          bj = j;
          if (v == 0) goto found;
        }
      }
    }
    if (best_v == e) break;
  found:;
    u64 v = best_v;
    u64 pv = checked_pow(p, static_cast<u32>(v));
    u64 unit = A[bi][bj] / pv;
    u64 uinv = invmod(unit, m);
    // Normalize the pivot row so the pivot entry becomes exactly p^v.
    for (auto& x : A[bi]) x = mulmod(x, uinv, m);
    b[bi] = mulmod(b[bi], uinv, m);
    // Forward elimination over the still-unused rows.
    for (std::size_t k = 0; k < rows; ++k) {
      if (row_used[k] || k == bi || A[k][bj] == 0) continue;
      u64 lambda = A[k][bj] / pv;
      for (std::size_t j = 0; j < cols; ++j) A[k][j] = submod(A[k][j], mulmod(lambda, A[bi][j], m), m);
      b[k] = submod(b[k], mulmod(lambda, b[bi], m), m);
    }
    row_used[bi] = true;
    col_used[bj] = true;
    pivots.emplace_back(bi, bj, v);
    if (pivots.size() == std::min(rows, cols)) break;
  }

  // Any fully-eliminated row must have a zero right-hand side.
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_used[i]) continue;
    bool all_zero = true;
    for (std::size_t j = 0; j < cols; ++j)
      if (!col_used[j] && A[i][j] != 0) all_zero = false;
    if (all_zero && b[i] != 0) return std::nullopt;
  }

  // Back-substitute in reverse pivot order; free variables stay zero.
  std::vector<u64> x(cols, 0);
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    auto [i, j, v] = *it;
    u64 rhs = b[i];
    for (std::size_t j2 = 0; j2 < cols; ++j2) {
      if (j2 == j || A[i][j2] == 0) continue;
      rhs = submod(rhs, mulmod(A[i][j2], x[j2], m), m);
    }
    u64 pv = checked_pow(p, static_cast<u32>(v));
    if (rhs % pv != 0) return std::nullopt;
    x[j] = rhs / pv;
  }
  return x;
}

namespace {

// One linear constraint: poly(input) == value (mod p^e), as a dense row.
void append_eval_row(std::vector<std::vector<u64>>& A, std::vector<u64>& b, u64 input, u64 value,
                     std::size_t ncoef, u64 m) {
  std::vector<u64> row(ncoef);
  u64 pw = 1;
  for (std::size_t k = 0; k < ncoef; ++k) {
    row[k] = pw;
    pw = mulmod(pw, input % m, m);
  }
  A.push_back(std::move(row));
  b.push_back(value % m);
}

}  // namespace

VerifyReport verify_digit_retain(const DensePoly& g, u64 p, u32 e, u64 seed) {
  u64 pe = checked_pow(p, e);
  require(g.modulus == pe, Errc::invalid_argument, "verify_digit_retain: modulus mismatch");
  VerifyReport rep;
  auto check_one = [&](u64 x) {
    u64 want = to_canonical(balanced(x % p, p), pe);
    ++rep.checked;
    if (g.eval(x) != want) {
      rep.first_bad_input = x;
      return false;
    }
    return true;
  };
  if (pe <= kExhaustiveVerifyLimit) {
    rep.exhaustive = true;
    for (u64 x = 0; x < pe; ++x)
      if (!check_one(x)) return rep;
  } else {
    rep.exhaustive = false;
    u64 pe1 = pe / p;
    // structured band: small |z1|, the extremes, then a seeded random sweep
    for (u64 z1 = 0; z1 <= 127; ++z1) {
      for (u64 d = 0; d < p; ++d) {
        if (!check_one((d + p * z1) % pe)) return rep;
        if (!check_one((d + p * (pe1 - 1 - z1 % pe1)) % pe)) return rep;
      }
    }
    Rng rng(seed);
    while (rep.checked < kSampledVerifyCount) {
      if (!check_one(rng.uniform(pe))) return rep;
    }
  }
  rep.ok = true;
  return rep;
}

VerifyReport verify_lift(const DensePoly& f, u64 p, u32 e, u64 seed) {
  u64 pe = checked_pow(p, e);
  require(f.modulus == pe, Errc::invalid_argument, "verify_lift: modulus mismatch");
  require(e >= 2, Errc::invalid_argument, "verify_lift: need e >= 2");
  VerifyReport rep;
  rep.exhaustive = true;
  Rng rng(seed);
  for (u32 t = 1; t < e; ++t) {
    u64 pt = checked_pow(p, t);
    u64 pt1 = pt * p;
    u64 z1_count = pe / pt;  // z1 ranges over Z_{p^(e-t)}
    bool exhaustive_t = z1_count <= kExhaustiveVerifyLimit / ((e - 1) * p + 1);
    u64 samples = exhaustive_t ? z1_count : kSampledVerifyCount / ((e - 1) * p + 1);
    for (i64 z0 = -static_cast<i64>(p - 1) / 2; z0 <= static_cast<i64>(p - 1) / 2; ++z0) {
      for (u64 s = 0; s < samples; ++s) {
        u64 z1 = exhaustive_t ? s : rng.uniform(z1_count);
        u64 x = to_canonical(z0 + static_cast<i64>(pt * z1), pe);
        ++rep.checked;
        if (f.eval(x) % pt1 != to_canonical(z0, pt1)) {
          rep.first_bad_input = x;
          rep.ok = false;
          return rep;
        }
      }
    }
    rep.exhaustive = rep.exhaustive && exhaustive_t;
  }
  rep.ok = true;
  return rep;
}

namespace {

std::map<std::pair<u64, u32>, DensePoly>& lift_cache() {
  static std::map<std::pair<u64, u32>, DensePoly> c;
  return c;
}

std::map<std::pair<u64, u32>, DensePoly>& retain_cache() {
  static std::map<std::pair<u64, u32>, DensePoly> c;
  return c;
}

}  // namespace

DensePoly build_F_lift(u64 p, u32 e) {
  require_odd_prime(p);
  require(e >= 2, Errc::invalid_argument, "build_F_lift: need e >= 2");
  auto key = std::make_pair(p, e);
  auto& cache = lift_cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  u64 m = checked_pow(p, e);
  std::size_t ncoef = p + 1;  // degree bound p
  std::vector<std::vector<u64>> A;
  std::vector<u64> b;
  // F(z0) == z0 (mod p^e) pins the digit; p^(e-1) F'(z0) == 0 (mod p^e) kills
  // the first-order term, and orders >= 2 vanish on their own.
  u64 pe1 = m / p;
  for (i64 z0 = -static_cast<i64>(p - 1) / 2; z0 <= static_cast<i64>(p - 1) / 2; ++z0) {
    u64 x = to_canonical(z0, m);
    append_eval_row(A, b, x, to_canonical(z0, m), ncoef, m);
    std::vector<u64> drow(ncoef, 0);
    u64 pw = 1;
    for (std::size_t k = 1; k < ncoef; ++k) {
      drow[k] = mulmod(mulmod(k % m, pw, m), pe1, m);
      pw = mulmod(pw, x, m);
    }
    A.push_back(std::move(drow));
    b.push_back(0);
  }
  auto sol = solve_mod_prime_power(std::move(A), std::move(b), p, e);
  require(sol.has_value(), Errc::verification, "build_F_lift: linear system unexpectedly inconsistent");
  DensePoly f{m, *sol};
  f.trim();
  auto rep = verify_lift(f, p, e);
  require(rep.ok, Errc::verification, "build_F_lift: constructed polynomial failed verification");
  cache.emplace(key, f);
  return f;
}

namespace {

// One constraint poly(input) == value (mod p^e) over odd powers only:
// row entries are input^1, input^3, ..., input^(2*nodd-1).
void append_odd_eval_row(std::vector<std::vector<u64>>& A, std::vector<u64>& b, u64 input,
                         u64 value, std::size_t nodd, u64 m) {
  std::vector<u64> row(nodd);
  u64 x = input % m;
  u64 x2 = mulmod(x, x, m);
  u64 pw = x;
  for (std::size_t j = 0; j < nodd; ++j) {
    row[j] = pw;
    pw = mulmod(pw, x2, m);
  }
  A.push_back(std::move(row));
  b.push_back(value % m);
}

}  // namespace

DensePoly build_G(u64 p, u32 e) {
  require_odd_prime(p);
  require(e >= 2, Errc::invalid_argument, "build_G: need e >= 2");
  auto key = std::make_pair(p, e);
  auto& cache = retain_cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  u64 m = checked_pow(p, e);
  u64 pe1 = m / p;
  std::size_t ncoef = (e - 1) * (p - 1) + 2;  // degree bound (e-1)(p-1)+1
  std::size_t nodd = ncoef / 2;               // odd ansatz: digit(-x) = -digit(x)

  // Constraint points: nonnegative balanced digits crossed with a band of z1
  // values (the negative-digit half is implied by oddness). When Z_{p^(e-1)}
  // is small the band is all of it and the system is the full one; otherwise
  // solve on the band, verify globally, and fold any violation back in as a
  // fresh constraint.
  u64 band = std::max<u64>(4, ncoef / p + 4);
  std::set<u64> z1s;
  if (pe1 <= band + 2) {
    for (u64 z1 = 0; z1 < pe1; ++z1) z1s.insert(z1);
  } else {
    z1s.insert(0);
    for (u64 k = 1; z1s.size() < band; ++k) {
      z1s.insert(k % pe1);
      z1s.insert(pe1 - k % pe1);
    }
    z1s.insert(pe1 / 2);
    z1s.insert(pe1 - 1);
  }

  std::set<u64> points;
  for (u64 z0 = 0; z0 <= (p - 1) / 2; ++z0)
    for (u64 z1 : z1s) points.insert(z0 + p * z1);

  for (int round = 0; round < 32; ++round) {
    std::vector<std::vector<u64>> A;
    std::vector<u64> b;
    A.reserve(points.size());
    for (u64 x : points) append_odd_eval_row(A, b, x, to_canonical(balanced(x % p, p), m), nodd, m);
    auto sol = solve_mod_prime_power(std::move(A), std::move(b), p, e);
    // A subset of a satisfiable system cannot be inconsistent.
    require(sol.has_value(), Errc::verification, "build_G: constraint subset inconsistent (internal bug)");
    DensePoly g{m, std::vector<u64>(ncoef, 0)};
    for (std::size_t j = 0; j < nodd; ++j) g.coeffs[2 * j + 1] = (*sol)[j];
    g.trim();
    auto rep = verify_digit_retain(g, p, e, static_cast<u64>(round) + 1);
    if (rep.ok) {
      cache.emplace(key, g);
      return g;
    }
    points.insert(rep.first_bad_input % m);
  }
  fail(Errc::verification, "build_G: no verified polynomial after augmentation rounds");
}

ParityForm parity_decompose(const DensePoly& f) {
  ParityForm out;
  if (f.is_zero()) {
    out.kind = ParityForm::Kind::even;
    out.h = DensePoly::zero(f.modulus);
    return out;
  }
  if (f.odd_powers_only()) {
    out.kind = ParityForm::Kind::odd;
    out.h = DensePoly::zero(f.modulus);
    for (std::size_t i = 1; i < f.coeffs.size(); i += 2) out.h.coeffs.push_back(f.coeffs[i]);
    out.h.trim();
    return out;
  }
  if (f.even_powers_only()) {
    out.kind = ParityForm::Kind::even;
    out.h = DensePoly::zero(f.modulus);
    for (std::size_t i = 0; i < f.coeffs.size(); i += 2) out.h.coeffs.push_back(f.coeffs[i]);
    out.h.trim();
    return out;
  }
  out.kind = ParityForm::Kind::mixed;
  out.h = DensePoly::zero(f.modulus);
  return out;
}

}  // namespace spaceswitch
