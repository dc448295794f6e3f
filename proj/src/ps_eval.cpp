// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/ps_eval.hpp"

#include <algorithm>
#include <cmath>

namespace spaceswitch {

namespace {

u64 isqrt_floor(u64 v) {
  if (v == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

u64 ceil_log2(u64 v) {
  u64 b = 0;
  while ((1ull << b) < v) ++b;
  return b;
}

// Intermediate value of a polynomial chunk: absent (all coefficients zero),
// a plain constant, or a ciphertext.
struct PsVal {
  enum class Kind { none, constant, cipher } kind = Kind::none;
  i64 cval = 0;
  CipherHandle h;

  static PsVal none() { return PsVal{}; }
  static PsVal constant(i64 c) {
    PsVal v;
    v.kind = Kind::constant;
    v.cval = c;
    return v;
  }
  static PsVal cipher(CipherHandle ch) {
    PsVal v;
    v.kind = Kind::cipher;
    v.h = std::move(ch);
    return v;
  }
};

class BsgsRun {
 public:
  // Evaluates sum_j f_j * (x^s)^j where x is the cache's base. The exponent
  // scale s keeps every cache key in x-exponent space, so odd polynomials
  // (evaluated at y = x^2) share cached powers with anything else built on x.
  BsgsRun(const DensePoly& f, u64 scale, PowerCache& cache)
      : f_(f), s_(scale), cache_(cache), m_(f.modulus) {}

  PsVal run() {
    u64 d = f_.degree();
    u64 r = isqrt_floor(d + 1);  // k = ceil(sqrt(d+1))
    k_ = (r * r == d + 1) ? r : r + 1;
    if (k_ == 0) k_ = 1;
    return node(0, d + 1);
  }

 private:
  i64 bal(u64 c) const { return balanced(c, m_); }

  // Chunk of exponents [i0, i0+len): scalar-combines cached powers.
  PsVal chunk(u64 i0, u64 len) {
    bool have_acc = false;
    CipherHandle acc;
    for (u64 j = 1; j < len; ++j) {
      u64 c = f_.coeff(i0 + j);
      if (c == 0) continue;
      CipherHandle t = cache_.evaluator().mul_plain(cache_.power(s_ * j), bal(c));
      acc = have_acc ? cache_.evaluator().add(acc, t) : t;
      have_acc = true;
    }
    u64 c0 = f_.coeff(i0);
    if (!have_acc) {
      if (c0 == 0) return PsVal::none();
      return PsVal::constant(bal(c0));
    }
    if (c0 != 0) acc = cache_.evaluator().add_plain(acc, bal(c0));
    return PsVal::cipher(acc);
  }

  PsVal node(u64 i0, u64 len) {
    if (len <= k_) return chunk(i0, len);
    u64 split = k_;
    while (split * 2 < len) split *= 2;
    PsVal left = node(i0, split);
    PsVal right = node(i0 + split, len - split);
    if (right.kind == PsVal::Kind::none) return left;
    CipherHandle giant = cache_.power(s_ * split);
    CipherHandle term = (right.kind == PsVal::Kind::constant)
                            ? cache_.evaluator().mul_plain(giant, right.cval)
                            : cache_.evaluator().mul(right.h, giant);
    switch (left.kind) {
      case PsVal::Kind::none:
        return PsVal::cipher(term);
      case PsVal::Kind::constant:
        return PsVal::cipher(cache_.evaluator().add_plain(term, left.cval));
      case PsVal::Kind::cipher:
        return PsVal::cipher(cache_.evaluator().add(left.h, term));
    }
    return PsVal::cipher(term);
  }

  const DensePoly& f_;
  u64 s_;
  PowerCache& cache_;
  u64 m_;
  u64 k_ = 1;
};

CipherHandle constant_result(PowerCache& cache, i64 c) {
  Evaluator& ev = cache.evaluator();
  CipherHandle zero = ev.mul_plain(cache.power(1), 0);
  return ev.add_plain(zero, c);
}

// Index of the single nonzero coefficient at exponent >= 1, or 0 if the
// polynomial has more (or none).
u64 lone_term_exponent(const DensePoly& g) {
  u64 idx = 0;
  for (u64 j = 1; j < g.coeffs.size(); ++j) {
    if (g.coeff(j) == 0) continue;
    if (idx != 0) return 0;
    idx = j;
  }
  return idx;
}

// Evaluates g at x^scale, where x is the cache base. Polynomials that are a
// constant plus one monomial skip the baby-step ladder entirely.
CipherHandle eval_scaled(const DensePoly& g, u64 scale, PowerCache& cache) {
  Evaluator& ev = cache.evaluator();
  u64 m = g.modulus;
  if (u64 lone = lone_term_exponent(g); lone != 0) {
    CipherHandle t = ev.mul_plain(cache.power(scale * lone), balanced(g.coeff(lone), m));
    u64 c0 = g.coeff(0);
    return c0 == 0 ? t : ev.add_plain(t, balanced(c0, m));
  }
  PsVal v = BsgsRun(g, scale, cache).run();
  if (v.kind == PsVal::Kind::cipher) return v.h;
  return constant_result(cache, v.kind == PsVal::Kind::constant ? v.cval : 0);
}

}  // namespace

PowerCache::PowerCache(Evaluator& ev, const CipherHandle& x) : ev_(&ev) {
  pw_.emplace(1, x);
}

CipherHandle PowerCache::power(u64 e) {
  require(e >= 1, Errc::invalid_argument, "PowerCache: exponent must be positive");
  auto it = pw_.find(e);
  if (it != pw_.end()) return it->second;
  auto ub = pw_.upper_bound(e);
  --ub;  // exponent 1 is always present
  u64 base = ub->first;
  if (e % 2 == 0 && (pw_.count(e / 2) != 0 || base <= e / 2)) {
    // Half is cached, or nothing cached beyond halfway: square up.
    CipherHandle h = power(e / 2);
    CipherHandle v = ev_->mul(h, h);
    pw_.emplace(e, v);
    return v;
  }
  // Split against the largest cached exponent, recurse on the remainder.
  CipherHandle rest = power(e - base);
  CipherHandle v = ev_->mul(pw_.at(base), rest);
  pw_.emplace(e, v);
  return v;
}

CipherHandle ps_eval_cached(const DensePoly& f, PowerCache& cache, const std::string& poly_name) {
  Evaluator& ev = cache.evaluator();
  const CipherHandle& x = cache.power(1);
  require(f.modulus == ev.tag_modulus(x.tag_exp), Errc::invalid_argument,
          "ps_eval: polynomial modulus does not match the handle's value modulus");
  if (!poly_name.empty()) ev.ledger().tally_poly(poly_name);

  DensePoly g = f;
  g.trim();
  u64 d = g.degree();
  if (g.is_zero() || d == 0) return constant_result(cache, g.is_zero() ? 0 : balanced(g.coeff(0), g.modulus));

  ParityForm pr = parity_decompose(g);
  if (pr.kind == ParityForm::Kind::odd) {
    if (pr.h.degree() == 0) {
      // f = c * x
      return ev.mul_plain(x, balanced(pr.h.coeff(0), g.modulus));
    }
    CipherHandle hv = eval_scaled(pr.h, 2, cache);
    return ev.mul(hv, x);
  }
  if (pr.kind == ParityForm::Kind::even) return eval_scaled(pr.h, 2, cache);
  return eval_scaled(g, 1, cache);
}

CipherHandle ps_eval(Evaluator& ev, const DensePoly& f, const CipherHandle& x,
                     const std::string& poly_name) {
  PowerCache cache(ev, x);
  return ps_eval_cached(f, cache, poly_name);
}

u64 ps_nonscalar_bound(u64 degree) {
  if (degree <= 1) return 1;
  u64 r = isqrt_floor(degree + 1);
  u64 k = (r * r == degree + 1) ? r : r + 1;
  return 2 * k + ceil_log2(degree);
}

}  // namespace spaceswitch
