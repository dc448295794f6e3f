// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/ring.hpp"

#include <cmath>

namespace spaceswitch {

Residue Residue::make(u64 v, u64 m) {
  require(m >= 2, Errc::invalid_argument, "Residue: modulus must be >= 2");
  return Residue{v % m, m};
}

Residue Residue::from_signed(i64 v, u64 m) {
  require(m >= 2, Errc::invalid_argument, "Residue: modulus must be >= 2");
  return Residue{to_canonical(v, m), m};
}

namespace {
void check_same_mod(const Residue& a, const Residue& b) {
  require(a.mod == b.mod, Errc::invalid_argument, "Residue: modulus mismatch");
}
}  // namespace

Residue Residue::add(const Residue& o) const {
  check_same_mod(*this, o);
  return Residue{addmod(val, o.val, mod), mod};
}

Residue Residue::sub(const Residue& o) const {
  check_same_mod(*this, o);
  return Residue{submod(val, o.val, mod), mod};
}

Residue Residue::mul(const Residue& o) const {
  check_same_mod(*this, o);
  return Residue{mulmod(val, o.val, mod), mod};
}

Residue Residue::pow(u64 e) const { return Residue{powmod(val, e, mod), mod}; }

Residue Residue::inv() const { return Residue{invmod(val, mod), mod}; }

Residue Residue::neg() const { return Residue{val == 0 ? 0 : mod - val, mod}; }

i64 Residue::balanced_rep() const { return balanced(val, mod); }

std::vector<i64> base_p_digits(u64 x, u64 p, u32 r) {
  require_odd_prime(p);
  require(r >= 1, Errc::invalid_argument, "base_p_digits: need r >= 1");
  u64 pr = checked_pow(p, r);
  i64 rem = static_cast<i64>(x % pr);
  std::vector<i64> d(r);
  for (u32 i = 0; i < r; ++i) {
    d[i] = balanced(to_canonical(rem, p), p);
    rem = (rem - d[i]) / static_cast<i64>(p);
  }
  return d;
}

u64 poly_eval_clear(const std::vector<u64>& coeffs, u64 x, u64 m) {
  u64 acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = addmod(mulmod(acc, x, m), *it % m, m);
  return acc;
}

RingElem::RingElem(std::size_t n, BigInt q) : q_(std::move(q)), coeffs_(n) {
  require(n > 0 && (n & (n - 1)) == 0, Errc::invalid_argument, "RingElem: n must be a power of two");
  require(q_ >= 2, Errc::invalid_argument, "RingElem: modulus must be >= 2");
}

void RingElem::set(std::size_t i, const BigInt& v) {
  BigInt r = v % q_;
  if (r < 0) r += q_;
  coeffs_[i] = r;
}

void RingElem::check_compat(const RingElem& o) const {
  require(n() == o.n() && q_ == o.q_, Errc::invalid_argument, "RingElem: shape mismatch");
}

RingElem RingElem::add(const RingElem& o) const {
  check_compat(o);
  RingElem out(n(), q_);
  for (std::size_t i = 0; i < n(); ++i) {
    BigInt s = coeffs_[i] + o.coeffs_[i];
    if (s >= q_) s -= q_;
    out.coeffs_[i] = std::move(s);
  }
  return out;
}

RingElem RingElem::sub(const RingElem& o) const {
  check_compat(o);
  RingElem out(n(), q_);
  for (std::size_t i = 0; i < n(); ++i) {
    BigInt s = coeffs_[i] - o.coeffs_[i];
    if (s < 0) s += q_;
    out.coeffs_[i] = std::move(s);
  }
  return out;
}

RingElem RingElem::neg() const {
  RingElem out(n(), q_);
  for (std::size_t i = 0; i < n(); ++i) out.coeffs_[i] = coeffs_[i] == 0 ? BigInt(0) : BigInt(q_ - coeffs_[i]);
  return out;
}

// Schoolbook negacyclic convolution. Cross terms with i + j >= n wrap with a
// sign flip (x^n = -1). Sums accumulate unreduced; one mod per output slot.
RingElem RingElem::mul(const RingElem& o) const {
  check_compat(o);
  std::size_t N = n();
  std::vector<BigInt> acc(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < N; ++j) {
      if (o.coeffs_[j] == 0) continue;
      BigInt prod = coeffs_[i] * o.coeffs_[j];
      std::size_t k = i + j;
      if (k < N) {
        acc[k] += prod;
      } else {
        acc[k - N] -= prod;
      }
    }
  }
  RingElem out(N, q_);
  for (std::size_t k = 0; k < N; ++k) {
    BigInt r = acc[k] % q_;
    if (r < 0) r += q_;
    out.coeffs_[k] = std::move(r);
  }
  return out;
}

RingElem RingElem::mul_small(const std::vector<i64>& d) const {
  require(d.size() == n(), Errc::invalid_argument, "RingElem: small factor has wrong length");
  std::size_t N = n();
  std::vector<BigInt> acc(N);
  for (std::size_t j = 0; j < N; ++j) {
    i64 dj = d[j];
    if (dj == 0) continue;
    for (std::size_t i = 0; i < N; ++i) {
      if (coeffs_[i] == 0) continue;
      BigInt prod = coeffs_[i] * dj;
      std::size_t k = i + j;
      if (k < N) {
        acc[k] += prod;
      } else {
        acc[k - N] -= prod;
      }
    }
  }
  RingElem out(N, q_);
  for (std::size_t k = 0; k < N; ++k) {
    BigInt r = acc[k] % q_;
    if (r < 0) r += q_;
    out.coeffs_[k] = std::move(r);
  }
  return out;
}

RingElem RingElem::scaled(const BigInt& k) const {
  RingElem out(n(), q_);
  BigInt kr = k % q_;
  if (kr < 0) kr += q_;
  for (std::size_t i = 0; i < n(); ++i) out.coeffs_[i] = coeffs_[i] * kr % q_;
  return out;
}

RingElem RingElem::reduced_to(const BigInt& new_q) const {
  require(new_q >= 2 && q_ % new_q == 0, Errc::invalid_argument, "RingElem: target modulus must divide current");
  RingElem out(n(), new_q);
  for (std::size_t i = 0; i < n(); ++i) out.coeffs_[i] = coeffs_[i] % new_q;
  return out;
}

RingElem RingElem::exact_div_balanced(const BigInt& d) const {
  require(d >= 2 && q_ % d == 0, Errc::invalid_argument, "RingElem: divisor must divide modulus");
  BigInt new_q = q_ / d;
  RingElem out(n(), new_q);
  for (std::size_t i = 0; i < n(); ++i) {
    BigInt b = balanced_big(coeffs_[i], q_);
    require(b % d == 0, Errc::invalid_argument, "RingElem: coefficient not divisible in exact_div");
    BigInt v = (b / d) % new_q;
    if (v < 0) v += new_q;
    out.coeffs_[i] = std::move(v);
  }
  return out;
}

BigInt RingElem::max_balanced_abs() const {
  BigInt best = 0;
  for (const auto& c : coeffs_) {
    BigInt b = balanced_big(c, q_);
    if (b < 0) b = -b;
    if (b > best) best = b;
  }
  return best;
}

RingElem sample_uniform(std::size_t n, const BigInt& q, Rng& rng) {
  RingElem out(n, q);
  unsigned bits = static_cast<unsigned>(msb(q)) + 1;
  unsigned words = (bits + 63) / 64;
  for (std::size_t i = 0; i < n; ++i) {
    // Rejection sample a uniform value below q from whole 64-bit words.
    BigInt v;
    do {
      v = 0;
      for (unsigned w = 0; w < words; ++w) v = (v << 64) | BigInt(rng.word());
      v >>= (words * 64 - bits);
    } while (v >= q);
    out.set(i, v);
  }
  return out;
}

std::vector<i64> sample_ternary(std::size_t n, std::size_t weight, Rng& rng) {
  require(weight <= n, Errc::invalid_argument, "sample_ternary: weight exceeds length");
  std::vector<i64> s(n, 0);
  std::size_t placed = 0;
  while (placed < weight) {
    std::size_t idx = rng.uniform(n);
    if (s[idx] != 0) continue;
    s[idx] = rng.uniform(2) ? 1 : -1;
    ++placed;
  }
  return s;
}

std::vector<i64> sample_gaussian(std::size_t n, double sigma, Rng& rng) {
  require(sigma > 0, Errc::invalid_argument, "sample_gaussian: sigma must be positive");
  i64 tail = static_cast<i64>(std::ceil(6.0 * sigma));
  std::vector<i64> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (;;) {
      i64 k = static_cast<i64>(rng.uniform(2 * tail + 1)) - tail;
      double accept = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
      if (rng.real01() <= accept) {
        e[i] = k;
        break;
      }
    }
  }
  return e;
}

}  // namespace spaceswitch
