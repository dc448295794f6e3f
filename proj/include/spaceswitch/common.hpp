// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_COMMON_HPP
#define SPACESWITCH_COMMON_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace spaceswitch {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

// Error categories; the CLI maps these onto its exit codes.
enum class Errc {
  invalid_argument,   // malformed inputs, modulus mismatches, bad state
  infeasible_params,  // no parameter choice satisfies the constraints
  io,                 // file / format problems
  verification,       // a checked property failed to hold
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s < a || s >= m) s -= m;
  return s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 acc = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) acc = mulmod(acc, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return acc;
}

// Inverse of a mod m via extended Euclid; requires gcd(a, m) == 1.
inline u64 invmod(u64 a, u64 m) {
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
  while (nr != 0) {
    i64 q = r / nr;
    i64 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  require(r == 1, Errc::invalid_argument, "invmod: arguments not coprime");
  if (t < 0) t += static_cast<i64>(m);
  return static_cast<u64>(t);
}

// Deterministic Miller-Rabin, valid for the full 64-bit range.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Representative of x in (-m/2, m/2]; x must already be in [0, m).
inline i64 balanced(u64 x, u64 m) {
  return x * 2 > m ? static_cast<i64>(x) - static_cast<i64>(m) : static_cast<i64>(x);
}

inline BigInt balanced_big(BigInt x, const BigInt& m) {
  x %= m;
  if (x < 0) x += m;
  if (x * 2 > m) x -= m;
  return x;
}

// Reduce a signed value into [0, m).
inline u64 to_canonical(i64 v, u64 m) {
  i64 r = v % static_cast<i64>(m);
  if (r < 0) r += static_cast<i64>(m);
  return static_cast<u64>(r);
}

inline u64 to_canonical_big(const BigInt& v, u64 m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return r.convert_to<u64>();
}

// p^r with an overflow check; the plaintext spaces here always fit u64.
inline u64 checked_pow(u64 p, u32 r) {
  u64 acc = 1;
  for (u32 i = 0; i < r; ++i) {
    require(acc <= UINT64_MAX / p, Errc::invalid_argument, "checked_pow: overflow");
    acc *= p;
  }
  return acc;
}

inline void require_odd_prime(u64 p) {
  require(p >= 3 && (p & 1) && is_prime(p), Errc::invalid_argument,
          "modulus base must be an odd prime, got " + std::to_string(p));
}

// Seeded RNG used everywhere randomness is needed, so runs reproduce exactly.
class Rng {
 public:
  explicit Rng(u64 seed) : gen_(seed) {}

  u64 word() { return gen_(); }

  // Uniform in [0, bound), bound > 0, rejection to kill modulo bias.
  u64 uniform(u64 bound) {
    u64 lim = UINT64_MAX - UINT64_MAX % bound;
    u64 v;
    do {
      v = gen_();
    } while (v >= lim);
    return v % bound;
  }

  double real01() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace spaceswitch

#endif
