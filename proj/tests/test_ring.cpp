// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "spaceswitch/ring.hpp"

using namespace spaceswitch;

namespace {

// Independent digit oracle: brute-force search over all balanced digit tuples
// would be exponential, so instead verify by recomposition, which is the
// defining property, plus uniqueness via counting (p^r tuples hit p^r values).
u64 recompose(const std::vector<i64>& d, u64 p, u64 pr) {
  i64 acc = 0;
  i64 pw = 1;
  for (i64 di : d) {
    acc += di * pw;
    pw *= static_cast<i64>(p);
  }
  return to_canonical(acc, pr);
}

// Reference negacyclic product: full 2n-1 integer convolution, then fold the
// upper half back in with a sign flip. Deliberately a different code path from
// RingElem::mul (no lazy skipping, separate fold step).
RingElem naive_negacyclic(const RingElem& a, const RingElem& b) {
  std::size_t n = a.n();
  std::vector<BigInt> full(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) full[i + j] += a[i] * b[j];
  RingElem out(n, a.q());
  for (std::size_t k = 0; k < n; ++k) {
    BigInt v = full[k];
    if (k + n < 2 * n - 1) v -= full[k + n];
    out.set(k, v);
  }
  return out;
}

bool trial_division_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("balanced representatives") {
  CHECK(balanced(2, 5) == 2);
  CHECK(balanced(3, 5) == -2);
  CHECK(balanced(0, 5) == 0);
  CHECK(balanced(171, 343) == 171);
  CHECK(balanced(172, 343) == -171);
  CHECK(balanced(4, 8) == 4);  // even modulus: m/2 stays positive
  CHECK(balanced(5, 8) == -3);
  for (u64 m : {3ull, 5ull, 7ull, 125ull, 343ull, 1024ull}) {
    for (u64 x = 0; x < m; ++x) {
      i64 b = balanced(x, m);
      CHECK(to_canonical(b, m) == x);
      CHECK(2 * b <= static_cast<i64>(m));
      CHECK(-2 * b < static_cast<i64>(m));
    }
  }
  CHECK(balanced_big(BigInt(171), BigInt(343)) == 171);
  CHECK(balanced_big(BigInt(172), BigInt(343)) == -171);
  CHECK(balanced_big(BigInt(-1), BigInt(343)) == -1);
}

TEST_CASE("balanced base-p digits: pinned examples") {
  CHECK(base_p_digits(117, 5, 3) == std::vector<i64>{2, -2, 0});
  CHECK(base_p_digits(33, 5, 3) == std::vector<i64>{-2, 2, 1});
  CHECK(base_p_digits(0, 5, 3) == std::vector<i64>{0, 0, 0});
  CHECK(base_p_digits(124, 5, 3) == std::vector<i64>{-1, 0, 0});  // 124 == -1 mod 125
}

TEST_CASE("balanced base-p digits: recomposition and bounds, exhaustive") {
  for (auto [p, r] : std::vector<std::pair<u64, u32>>{{3, 2}, {3, 4}, {5, 3}, {7, 2}, {7, 3}, {17, 2}}) {
    u64 pr = checked_pow(p, r);
    for (u64 x = 0; x < pr; ++x) {
      auto d = base_p_digits(x, p, r);
      REQUIRE(d.size() == r);
      for (i64 di : d) CHECK(2 * std::abs(di) <= static_cast<i64>(p - 1));
      REQUIRE(recompose(d, p, pr) == x);
    }
  }
}

TEST_CASE("digit decomposition rejects bad bases") {
  CHECK_THROWS_AS(base_p_digits(1, 4, 2), Error);
  CHECK_THROWS_AS(base_p_digits(1, 2, 2), Error);
  CHECK_THROWS_AS(base_p_digits(1, 9, 2), Error);
}

TEST_CASE("Residue arithmetic matches wide-integer oracle") {
  Rng rng(42);
  for (int iter = 0; iter < 2000; ++iter) {
    u64 m = 2 + rng.uniform((1ull << 40) - 2);
    u64 a = rng.uniform(m), b = rng.uniform(m);
    auto ra = Residue::make(a, m), rb = Residue::make(b, m);
    CHECK(ra.add(rb).val == (a + b) % m);
    CHECK(ra.sub(rb).val == static_cast<u64>(((i128)a - b % m + m) % m));
    CHECK(ra.mul(rb).val == static_cast<u64>((u128)a * b % m));
    CHECK(ra.neg().add(ra).val == 0);
  }
}

TEST_CASE("Residue pow and inv") {
  Rng rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    u64 m = 2 + rng.uniform(1 << 20);
    u64 a = rng.uniform(m);
    auto r = Residue::make(a, m);
    // pow vs repeated multiplication
    u64 e = rng.uniform(30);
    Residue acc = Residue::make(1, m);
    for (u64 i = 0; i < e; ++i) acc = acc.mul(r);
    CHECK(r.pow(e).val == acc.val);
    if (std::gcd(a, m) == 1 && a != 0) {
      CHECK(r.inv().mul(r).val == 1 % m);
    }
  }
  CHECK_THROWS_AS(Residue::make(2, 10).inv(), Error);
  CHECK_THROWS_AS(Residue::make(1, 7).add(Residue::make(1, 5)), Error);
}

TEST_CASE("primality") {
  for (u64 n = 0; n < 2000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
  CHECK(is_prime(561) == false);          // Carmichael
  CHECK(is_prime(3215031751ull) == false);  // strong pseudoprime to small bases
  CHECK(is_prime((1ull << 40) - 87));       // 40-bit prime
  CHECK(is_prime(2411));
  CHECK(is_prime(3137));
  CHECK(!is_prime(3135));
}

TEST_CASE("poly_eval_clear Horner vs direct power sum") {
  Rng rng(3);
  for (int iter = 0; iter < 200; ++iter) {
    u64 m = 2 + rng.uniform(1 << 16);
    std::size_t deg = rng.uniform(12);
    std::vector<u64> c(deg + 1);
    for (auto& ci : c) ci = rng.uniform(m);
    u64 x = rng.uniform(m);
    u64 want = 0;
    for (std::size_t i = 0; i < c.size(); ++i) want = addmod(want, mulmod(c[i], powmod(x, i, m), m), m);
    CHECK(poly_eval_clear(c, x, m) == want);
  }
}

TEST_CASE("negacyclic ring: x * x^(n-1) == -1") {
  std::size_t n = 16;
  BigInt q = 97;
  RingElem a(n, q), b(n, q);
  a.set(1, 1);
  b.set(n - 1, 1);
  RingElem p = a.mul(b);
  CHECK(p[0] == q - 1);
  for (std::size_t i = 1; i < n; ++i) CHECK(p[i] == 0);
}

TEST_CASE("negacyclic ring multiply matches fold oracle") {
  Rng rng(11);
  for (std::size_t n : {4ull, 8ull, 64ull}) {
    BigInt q = (BigInt(1) << 80) + 13;
    for (int iter = 0; iter < 8; ++iter) {
      RingElem a = sample_uniform(n, q, rng);
      RingElem b = sample_uniform(n, q, rng);
      CHECK(a.mul(b) == naive_negacyclic(a, b));
      // ring axioms spot-checks
      CHECK(a.mul(b) == b.mul(a));
      CHECK(a.add(b).sub(b) == a);
      CHECK(a.sub(a).max_balanced_abs() == 0);
    }
  }
}

TEST_CASE("mul_small agrees with promoted multiply") {
  Rng rng(13);
  std::size_t n = 32;
  BigInt q = (BigInt(1) << 120) + 451;
  for (int iter = 0; iter < 6; ++iter) {
    RingElem a = sample_uniform(n, q, rng);
    std::vector<i64> d(n);
    for (auto& di : d) di = static_cast<i64>(rng.uniform(2001)) - 1000;
    RingElem promoted(n, q);
    for (std::size_t i = 0; i < n; ++i) promoted.set(i, BigInt(d[i]));
    CHECK(a.mul_small(d) == a.mul(promoted));
  }
}

TEST_CASE("scaled / reduced_to / exact_div_balanced") {
  Rng rng(17);
  std::size_t n = 8;
  BigInt q = BigInt(3125) * 65537;
  RingElem a = sample_uniform(n, q, rng);
  CHECK(a.scaled(BigInt(1)) == a);
  CHECK(a.scaled(BigInt(0)).max_balanced_abs() == 0);
  CHECK(a.scaled(BigInt(7)) == a.add(a).add(a).add(a).add(a).add(a).add(a));

  RingElem r = a.reduced_to(BigInt(65537));
  for (std::size_t i = 0; i < n; ++i) CHECK(r[i] == a[i] % 65537);
  CHECK_THROWS_AS(a.reduced_to(BigInt(65539)), Error);

  // multiply by d then divide by d round-trips when coefficients stay small
  RingElem small(n, q);
  for (std::size_t i = 0; i < n; ++i) small.set(i, BigInt(static_cast<i64>(rng.uniform(401)) - 200));
  RingElem blown = small.scaled(BigInt(65537));
  RingElem back = blown.exact_div_balanced(BigInt(65537));
  CHECK(back.q() == 3125);
  for (std::size_t i = 0; i < n; ++i) CHECK(balanced_big(back[i], back.q()) == balanced_big(small[i], q));
}

TEST_CASE("samplers") {
  Rng r1(99), r2(99), r3(100);
  auto t1 = sample_ternary(64, 16, r1);
  auto t2 = sample_ternary(64, 16, r2);
  auto t3 = sample_ternary(64, 16, r3);
  CHECK(t1 == t2);
  CHECK(t1 != t3);
  std::size_t nz = 0;
  for (i64 v : t1) {
    CHECK((v == -1 || v == 0 || v == 1));
    if (v != 0) ++nz;
  }
  CHECK(nz == 16);

  auto e = sample_gaussian(4096, 3.2, r1);
  i64 tail = 20;  // ceil(6 * 3.2) = 20
  double sum = 0, sumsq = 0;
  for (i64 v : e) {
    CHECK(std::abs(v) <= tail);
    sum += static_cast<double>(v);
    sumsq += static_cast<double>(v) * v;
  }
  double mean = sum / 4096.0;
  double var = sumsq / 4096.0 - mean * mean;
  CHECK(std::abs(mean) < 0.5);
  CHECK(var > 3.2 * 3.2 * 0.7);
  CHECK(var < 3.2 * 3.2 * 1.3);

  BigInt q = (BigInt(1) << 77) + 3;
  RingElem u = sample_uniform(256, q, r1);
  for (std::size_t i = 0; i < 256; ++i) CHECK(u[i] < q);
}
