// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/bgv.hpp"

#include <algorithm>
#include <cmath>

namespace spaceswitch {

namespace {

// Extended Euclid over BigInt. Requires gcd(a, m) == 1.
BigInt invmod_big(BigInt a, const BigInt& m) {
  a %= m;
  if (a < 0) a += m;
  BigInt t = 0, nt = 1, r = m, nr = a;
  while (nr != 0) {
    BigInt q = r / nr;
    BigInt tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  require(r == 1, Errc::invalid_argument, "invmod_big: arguments not coprime");
  if (t < 0) t += m;
  return t;
}

// Balanced base-2^w digits of the balanced coefficients of x. Row j holds
// digit j across all coefficients; rows end at the last nonzero digit.
std::vector<std::vector<i64>> gadget_digits(const RingElem& x, u32 w) {
  const BigInt base = BigInt(1) << w;
  std::vector<std::vector<i64>> rows;
  for (std::size_t i = 0; i < x.n(); ++i) {
    BigInt b = balanced_big(x[i], x.q());
    std::size_t j = 0;
    while (b != 0) {
      BigInt d = b % base;
      if (d < 0) d += base;
      if (d * 2 > base) d -= base;
      if (j >= rows.size()) rows.emplace_back(x.n(), 0);
      rows[j][i] = d.convert_to<i64>();
      b = (b - d) / base;
      ++j;
    }
  }
  return rows;
}

u64 derive_seed(u64 seed, u64 salt) { return seed * 0x9e3779b97f4a7c15ULL + salt; }

// log2 of a positive BigInt, exact enough for budget reporting (the top 53
// bits feed a double; values can far exceed double range).
double log2_big(const BigInt& x) {
  unsigned bits = msb(x);
  if (bits <= 52) return std::log2(x.convert_to<double>());
  BigInt top = x >> (bits - 52);
  return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

}  // namespace

BgvContext::BgvContext(const ParamSet& ps, std::size_t secret_weight) : ps_(ps) {
  require_odd_prime(ps_.p);
  require(ps_.r >= 1, Errc::invalid_argument, "BgvContext: need r >= 1");
  require(ps_.levels >= 1, Errc::invalid_argument, "BgvContext: need at least one level");
  require(ps_.slots == 1, Errc::invalid_argument, "BgvContext: lattice backend packs one slot");
  std::size_t n = ps_.ring_dim;
  require(n >= 8 && n <= 4096 && (n & (n - 1)) == 0, Errc::invalid_argument,
          "BgvContext: ring_dim must be a power of two in [8, 4096]");
  require(ps_.sigma > 0.0, Errc::invalid_argument, "BgvContext: sigma must be positive");
  require(ps_.prime_bits >= 30 && ps_.prime_bits <= 62, Errc::invalid_argument,
          "BgvContext: prime_bits must lie in [30, 62]");
  require(ps_.relin_window >= 2 && ps_.relin_window <= 40, Errc::invalid_argument,
          "BgvContext: relin_window must lie in [2, 40]");
  u64 pr = checked_pow(ps_.p, ps_.r);
  require(BigInt(pr) * 1024 < (BigInt(1) << ps_.prime_bits), Errc::infeasible_params,
          "BgvContext: chain primes leave no noise headroom over p^r");
  if (secret_weight == kDefaultWeight) secret_weight = std::min<std::size_t>(n / 4, 64);
  require(secret_weight <= n, Errc::invalid_argument, "BgvContext: secret weight exceeds ring_dim");
  build_chain();
  keygen(secret_weight);
}

const BigInt& BgvContext::modulus_at(u32 level) const {
  require(level < q_prod_.size(), Errc::invalid_argument, "BgvContext: level out of range");
  return q_prod_[level];
}

// Chain primes are the smallest primes of the form k * p^r + 1 with
// prime_bits bits. The congruence makes every chain prime act as 1 on the
// plaintext, so modulus switching never disturbs the message residue.
void BgvContext::build_chain() {
  u64 pr = checked_pow(ps_.p, ps_.r);
  u64 lo = 1ULL << (ps_.prime_bits - 1);
  u64 hi = (ps_.prime_bits == 63) ? UINT64_MAX : (1ULL << ps_.prime_bits);
  u64 k = lo / pr + 1;
  std::size_t want = static_cast<std::size_t>(ps_.levels) + 1;
  while (chain_.size() < want) {
    u64 q = k * pr + 1;
    require(q > lo && q < hi, Errc::infeasible_params,
            "BgvContext: not enough chain primes below 2^prime_bits");
    if (is_prime(q)) chain_.push_back(q);
    ++k;
  }
  q_prod_.resize(chain_.size());
  BigInt acc = 1;
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    acc *= chain_[i];
    q_prod_[i] = acc;
  }
}

RingElem BgvContext::noise_times(u64 scale, Rng& rng) const {
  std::size_t n = ps_.ring_dim;
  const BigInt& Q = q_prod_.back();
  auto e = sample_gaussian(n, ps_.sigma, rng);
  RingElem out(n, Q);
  for (std::size_t i = 0; i < n; ++i) out.set(i, BigInt(e[i]) * scale);
  return out;
}

void BgvContext::keygen(std::size_t secret_weight) {
  std::size_t n = ps_.ring_dim;
  const BigInt& Q = q_prod_.back();
  Rng rng(derive_seed(ps_.seed, 0xB6D1));

  s_ = sample_ternary(n, secret_weight, rng);
  RingElem s_ring(n, Q);
  for (std::size_t i = 0; i < n; ++i) s_ring.set(i, BigInt(s_[i]));
  s_squared_ = s_ring.mul_small(s_);

  // One gadget row per base-2^w digit of a balanced value mod Q, plus one
  // spare so decomposition can never outrun the key.
  u64 pr = checked_pow(ps_.p, ps_.r);
  u32 w = ps_.relin_window;
  std::size_t rows = (msb(Q) + 1 + w - 1) / w + 1;
  evk_.reserve(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    RingElem a = sample_uniform(n, Q, rng);
    RingElem b = noise_times(pr, rng).sub(a.mul_small(s_));
    b = b.add(s_squared_.scaled(BigInt(1) << (j * w)));
    evk_.emplace_back(std::move(b), std::move(a));
  }
}

const std::vector<std::pair<RingElem, RingElem>>& BgvContext::evk_at(u32 level) const {
  require(level < q_prod_.size(), Errc::invalid_argument, "BgvContext: level out of range");
  if (level + 1 == q_prod_.size()) return evk_;
  std::lock_guard<std::mutex> lk(evk_mu_);
  auto it = evk_cache_.find(level);
  if (it != evk_cache_.end()) return it->second;
  const BigInt& Q = q_prod_[level];
  std::vector<std::pair<RingElem, RingElem>> reduced;
  // The key identity b + a*s = p^r e + 2^{jw} s^2 survives reduction because
  // Q_level divides Q_top.
  std::size_t rows = (msb(Q) + 1 + ps_.relin_window - 1) / ps_.relin_window + 1;
  rows = std::min(rows, evk_.size());
  reduced.reserve(rows);
  for (std::size_t j = 0; j < rows; ++j)
    reduced.emplace_back(evk_[j].first.reduced_to(Q), evk_[j].second.reduced_to(Q));
  return evk_cache_.emplace(level, std::move(reduced)).first->second;
}

BgvCiphertext BgvContext::encrypt(u64 m, Rng& rng) const {
  std::size_t n = ps_.ring_dim;
  const BigInt& Q = q_prod_.back();
  u64 pr = checked_pow(ps_.p, ps_.r);
  require(m < pr, Errc::invalid_argument, "BgvContext: plaintext outside Z_{p^r}");
  RingElem c1 = sample_uniform(n, Q, rng);
  RingElem c0 = noise_times(pr, rng).sub(c1.mul_small(s_));
  c0.set(0, c0[0] + m);
  BgvCiphertext out{std::move(c0), std::move(c1), static_cast<u32>(ps_.levels)};
  debug_check(out);
  return out;
}

u64 BgvContext::decrypt(const BgvCiphertext& ct, u32 tag_exp) const {
  require(tag_exp >= 1 && tag_exp <= ps_.r, Errc::invalid_argument, "BgvContext: bad tag");
  require(noise_budget_bits(ct) > 0.0, Errc::verification,
          "BgvContext: decryption invalid, noise reached the wrap boundary");
  RingElem v = ct.c0.add(ct.c1.mul_small(s_));
  BigInt b = balanced_big(v[0], v.q());
  BigInt pt = checked_pow(ps_.p, tag_exp);
  b %= pt;
  if (b < 0) b += pt;
  return b.convert_to<u64>();
}

double BgvContext::noise_budget_bits(const BgvCiphertext& ct) const {
  RingElem v = ct.c0.add(ct.c1.mul_small(s_));
  BigInt mb = v.max_balanced_abs();
  double qhalf = log2_big(v.q()) - 1.0;
  if (mb == 0) return qhalf;
  return qhalf - log2_big(mb);
}

// Release builds trust the noise analysis; debug builds recompute the
// decryption identity after every operation and stop at the first wrap.
void BgvContext::debug_check(const BgvCiphertext& ct) const {
#ifndef NDEBUG
  require(noise_budget_bits(ct) > 0.0, Errc::verification,
          "BgvContext: noise invariant violated mid-pipeline");
#else
  (void)ct;
#endif
}

// Divide by the dropped prime after adding a correction divisible by p^tag
// and congruent to -ct mod that prime. Works on the balanced representative,
// so the quotient is the small one.
BgvCiphertext BgvContext::mod_switch(const BgvCiphertext& ct, u32 tag_exp) const {
  require(ct.level >= 1, Errc::invalid_argument, "BgvContext: cannot switch below the last level");
  std::size_t n = ps_.ring_dim;
  u64 q = chain_[ct.level];
  u64 pt = checked_pow(ps_.p, tag_exp);
  u64 inv_pt = invmod(pt % q, q);
  const BigInt& Qcur = q_prod_[ct.level];
  auto switch_comp = [&](const RingElem& c) {
    RingElem delta(n, Qcur);
    for (std::size_t i = 0; i < n; ++i) {
      u64 xq = (c[i] % q).convert_to<u64>();
      u64 alpha = mulmod((q - xq) % q, inv_pt, q);
      i64 ab = (alpha * 2 > q) ? static_cast<i64>(alpha) - static_cast<i64>(q)
                               : static_cast<i64>(alpha);
      delta.set(i, BigInt(ab) * pt);
    }
    return c.add(delta).exact_div_balanced(BigInt(q));
  };
  BgvCiphertext out{switch_comp(ct.c0), switch_comp(ct.c1), ct.level - 1};
  debug_check(out);
  return out;
}

BgvCiphertext BgvContext::to_level(const BgvCiphertext& ct, u32 level, u32 tag_exp) const {
  require(level <= ct.level, Errc::invalid_argument, "BgvContext: cannot raise a level");
  BgvCiphertext out = ct;
  while (out.level > level) out = mod_switch(out, tag_exp);
  return out;
}

BgvCiphertext BgvContext::mul(const BgvCiphertext& a, const BgvCiphertext& b, u32 tag_exp,
                              u32 out_level) const {
  u32 work = out_level + 1;
  BgvCiphertext ca = to_level(a, work, tag_exp);
  BgvCiphertext cb = to_level(b, work, tag_exp);

  RingElem e0 = ca.c0.mul(cb.c0);
  RingElem e1 = ca.c0.mul(cb.c1).add(ca.c1.mul(cb.c0));
  RingElem e2 = ca.c1.mul(cb.c1);

  const auto& evk = evk_at(work);
  auto rows = gadget_digits(e2, ps_.relin_window);
  require(rows.size() <= evk.size(), Errc::invalid_argument,
          "BgvContext: gadget decomposition outran the key");
  for (std::size_t j = 0; j < rows.size(); ++j) {
    bool all_zero = std::all_of(rows[j].begin(), rows[j].end(), [](i64 d) { return d == 0; });
    if (all_zero) continue;
    e0 = e0.add(evk[j].first.mul_small(rows[j]));
    e1 = e1.add(evk[j].second.mul_small(rows[j]));
  }
  return mod_switch(BgvCiphertext{std::move(e0), std::move(e1), work}, tag_exp);
}

BgvCiphertext BgvContext::add(const BgvCiphertext& a, const BgvCiphertext& b, u32 tag_exp,
                              u32 out_level, bool negate_b) const {
  BgvCiphertext ca = to_level(a, out_level, tag_exp);
  BgvCiphertext cb = to_level(b, out_level, tag_exp);
  BgvCiphertext out = negate_b ? BgvCiphertext{ca.c0.sub(cb.c0), ca.c1.sub(cb.c1), out_level}
                               : BgvCiphertext{ca.c0.add(cb.c0), ca.c1.add(cb.c1), out_level};
  debug_check(out);
  return out;
}

BgvCiphertext BgvContext::add_constant(const BgvCiphertext& ct, i64 k, u32 tag_exp) const {
  u64 pt = checked_pow(ps_.p, tag_exp);
  i64 kb = Residue::from_signed(k, pt).balanced_rep();
  BgvCiphertext out = ct;
  out.c0.set(0, out.c0[0] + kb);
  debug_check(out);
  return out;
}

BgvCiphertext BgvContext::mul_constant(const BgvCiphertext& ct, i64 k, u32 tag_exp) const {
  u64 pt = checked_pow(ps_.p, tag_exp);
  BigInt kb = Residue::from_signed(k, pt).balanced_rep();
  BgvCiphertext out{ct.c0.scaled(kb), ct.c1.scaled(kb), ct.level};
  debug_check(out);
  return out;
}

BgvCiphertext BgvContext::divide_by_p(const BgvCiphertext& ct) const {
  const BigInt& Q = q_prod_[ct.level];
  BigInt inv = invmod_big(BigInt(ps_.p), Q);
  BgvCiphertext out{ct.c0.scaled(inv), ct.c1.scaled(inv), ct.level};
  debug_check(out);
  return out;
}

BgvEval::BgvEval(const ParamSet& ps)
    : Evaluator(ps), ctx_(ps), rng_(derive_seed(ps.seed, 0x3A94)) {}

const BgvCiphertext& BgvEval::ct(const CipherHandle& h) const {
  return *static_cast<const BgvCiphertext*>(h.impl.get());
}

const BgvCiphertext& BgvEval::raw(const CipherHandle& h) const {
  check_owned(h);
  const BgvCiphertext& c = ct(h);
  require(c.level == h.level, Errc::invalid_argument, "BgvEval: handle level out of sync");
  return c;
}

CipherHandle BgvEval::adopt(BgvCiphertext c, u32 level, u32 tag_exp) {
  require(level == c.level && level <= ps_.levels, Errc::invalid_argument,
          "BgvEval: adopt level mismatch");
  require(tag_exp >= 1 && tag_exp <= ps_.r, Errc::invalid_argument, "BgvEval: adopt tag mismatch");
  require(c.c0.n() == ctx_.ring_dim() && c.c0.q() == ctx_.modulus_at(level),
          Errc::invalid_argument, "BgvEval: adopt shape mismatch");
  require(c.c1.n() == ctx_.ring_dim() && c.c1.q() == ctx_.modulus_at(level),
          Errc::invalid_argument, "BgvEval: adopt shape mismatch");
  return wrap(std::make_shared<BgvCiphertext>(std::move(c)), level, tag_exp);
}

double BgvEval::noise_budget_bits(const CipherHandle& h) const {
  check_owned(h);
  return ctx_.noise_budget_bits(ct(h));
}

std::shared_ptr<void> BgvEval::do_encode(const std::vector<u64>& xs) {
  std::lock_guard<std::mutex> lk(rng_mu_);
  return std::make_shared<BgvCiphertext>(ctx_.encrypt(xs[0], rng_));
}

std::vector<u64> BgvEval::do_decode(const CipherHandle& h) {
  return {ctx_.decrypt(ct(h), h.tag_exp)};
}

std::shared_ptr<void> BgvEval::do_add(const CipherHandle& a, const CipherHandle& b, u32 out_level) {
  return std::make_shared<BgvCiphertext>(ctx_.add(ct(a), ct(b), a.tag_exp, out_level, false));
}

std::shared_ptr<void> BgvEval::do_sub(const CipherHandle& a, const CipherHandle& b, u32 out_level) {
  return std::make_shared<BgvCiphertext>(ctx_.add(ct(a), ct(b), a.tag_exp, out_level, true));
}

std::shared_ptr<void> BgvEval::do_mul(const CipherHandle& a, const CipherHandle& b, u32 out_level) {
  return std::make_shared<BgvCiphertext>(ctx_.mul(ct(a), ct(b), a.tag_exp, out_level));
}

std::shared_ptr<void> BgvEval::do_add_plain(const CipherHandle& a, i64 k) {
  return std::make_shared<BgvCiphertext>(ctx_.add_constant(ct(a), k, a.tag_exp));
}

std::shared_ptr<void> BgvEval::do_mul_plain(const CipherHandle& a, i64 k) {
  return std::make_shared<BgvCiphertext>(ctx_.mul_constant(ct(a), k, a.tag_exp));
}

// Exactness rests on the caller having made the plaintext divisible by p;
// there is no way to check under encryption, so a violated precondition
// yields silent garbage here where the cleartext backend throws.
std::shared_ptr<void> BgvEval::do_divide_by_p(const CipherHandle& a) {
  return std::make_shared<BgvCiphertext>(ctx_.divide_by_p(ct(a)));
}

std::shared_ptr<void> BgvEval::do_change_mod(const CipherHandle& a, u32) { return a.impl; }

// The ciphertext already carries m + p*e; under the full tag the noise
// digits above the first become the unspecified p*g garbage.
std::shared_ptr<void> BgvEval::do_reinterpret_full(const CipherHandle& a) { return a.impl; }

}  // namespace spaceswitch
