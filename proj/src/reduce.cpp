// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/reduce.hpp"

#include "spaceswitch/interp.hpp"
#include "spaceswitch/ps_eval.hpp"

namespace spaceswitch {

namespace {

// Canonical coefficient lift to a larger modulus. Sound whenever only the
// result modulo the original modulus is consumed.
DensePoly lifted(const DensePoly& f, u64 new_mod) {
  require(new_mod >= f.modulus, Errc::invalid_argument, "lift must not shrink the modulus");
  DensePoly g = f;
  g.modulus = new_mod;
  return g;
}

u32 ceil_log2_u(u64 v) {
  u32 b = 0;
  while ((1ull << b) < v) ++b;
  return b;
}

}  // namespace

const char* strategy_name(ExtractionStrategy s) {
  switch (s) {
    case ExtractionStrategy::HaleviShoup:
      return "halevi-shoup";
    case ExtractionStrategy::ChenHan:
      return "chen-han";
    case ExtractionStrategy::Geelen:
      return "geelen";
    case ExtractionStrategy::SpaceSwitch:
      return "space-switch";
  }
  return "space-switch";
}

ExtractionStrategy strategy_from_name(const std::string& name) {
  for (ExtractionStrategy s : {ExtractionStrategy::HaleviShoup, ExtractionStrategy::ChenHan,
                               ExtractionStrategy::Geelen, ExtractionStrategy::SpaceSwitch}) {
    if (name == strategy_name(s)) return s;
  }
  fail(Errc::invalid_argument, "unknown extraction strategy: " + name);
}

std::string retain_poly_name(u32 e) { return "retain[" + std::to_string(e) + "]"; }

std::vector<CipherHandle> reduce_to_digits(Evaluator& ev, const CipherHandle& x,
                                           ExtractionStrategy strategy) {
  const u64 p = ev.params().p;
  const u32 r = ev.params().r;
  require(x.tag_exp == r, Errc::invalid_argument, "reduce_to_digits expects a full-tag input");

  std::vector<CipherHandle> digits;
  digits.reserve(r);
  if (r == 1) {
    digits.push_back(x);
    return digits;
  }

  StageScope scope(ev.ledger(), "reduction");

  if (strategy == ExtractionStrategy::SpaceSwitch) {
    CipherHandle b = x;
    for (u32 i = 0; i + 1 < r; ++i) {
      u32 e = r - i;
      digits.push_back(ev.change_mod_to_p(b));
      CipherHandle d = ps_eval(ev, build_G(p, e), b, retain_poly_name(e));
      b = ev.divide_by_p(ev.sub(b, d));
    }
    digits.push_back(b);
    return digits;
  }

  // Triangle of refinements: a[i][j] agrees with digit i modulo p^(j+1) and
  // lives at tag r-i; a[i][0] is the running value b_i. Each next b is peeled
  // off the original input along an anti-diagonal, because b_i itself only
  // carries digit i to single precision.
  std::vector<std::vector<CipherHandle>> a(r);
  a[0].push_back(x);
  for (u32 i = 0; i + 1 < r; ++i) {
    u32 row_tag = r - i;
    for (u32 j = 1; j <= r - 1 - i; ++j) {
      CipherHandle v;
      if (strategy == ExtractionStrategy::Geelen) {
        v = ps_eval(ev, lifted(build_G(p, j + 1), ev.tag_modulus(row_tag)), a[i][0],
                    retain_poly_name(j + 1));
      } else if (strategy == ExtractionStrategy::ChenHan && j == r - 1 - i) {
        v = ps_eval(ev, build_G(p, row_tag), a[i][0], retain_poly_name(row_tag));
      } else {
        v = ps_eval(ev, build_F_lift(p, row_tag), a[i][j - 1], "digit_lift");
      }
      a[i].push_back(v);
    }
    CipherHandle t = x;
    for (u32 k = 0; k <= i; ++k) t = ev.divide_by_p(ev.sub(t, a[k][i + 1 - k]));
    a[i + 1].push_back(t);
  }
  for (u32 i = 0; i < r; ++i) digits.push_back(i + 1 == r ? a[i][0] : ev.change_mod_to_p(a[i][0]));
  return digits;
}

CipherHandle raise_mod(Evaluator& ev, const CipherHandle& x) {
  const u64 p = ev.params().p;
  const u32 r = ev.params().r;
  require(x.tag_exp == 1, Errc::invalid_argument, "raise_mod expects a tag-1 input");
  StageScope scope(ev.ledger(), "raise");
  CipherHandle up = ev.reinterpret_full_tag(x);
  if (r == 1) return up;
  return ps_eval(ev, build_G(p, r), up, retain_poly_name(r));
}

std::map<std::string, u64> extraction_eval_counts(ExtractionStrategy s, u64 p, u32 r) {
  (void)p;
  std::map<std::string, u64> m;
  if (r <= 1) return m;
  switch (s) {
    case ExtractionStrategy::HaleviShoup:
      m["digit_lift"] = static_cast<u64>(r) * (r - 1) / 2;
      break;
    case ExtractionStrategy::ChenHan:
      if (r >= 3) m["digit_lift"] = static_cast<u64>(r - 1) * (r - 2) / 2;
      for (u32 e = 2; e <= r; ++e) m[retain_poly_name(e)] = 1;
      break;
    case ExtractionStrategy::Geelen:
      for (u32 e = 2; e <= r; ++e) m[retain_poly_name(e)] = r - e + 1;
      break;
    case ExtractionStrategy::SpaceSwitch:
      for (u32 e = 2; e <= r; ++e) m[retain_poly_name(e)] = 1;
      break;
  }
  return m;
}

DepthBreakdown estimate_depth_detail(u64 p, u32 r) {
  require_odd_prime(p);
  require(r >= 1, Errc::invalid_argument, "r must be positive");
  DepthBreakdown d;
  for (u32 i = 0; i + 1 < r; ++i) d.reduce += ceil_log2_u((p - 1) * (r - i - 1) + 1);
  d.compare = ceil_log2_u(p - 1);
  if (r >= 2) {
    d.aggregate = r - 1;
    d.raise = ceil_log2_u((p - 1) * (r - 1) + 1);
    // rounding headroom: up to two levels per chained polynomial stage
    // (r - 1 retains, the digit comparison, the lift back up)
    d.slack = 2 * (r + 1);
  } else {
    d.slack = 2;
  }
  return d;
}

u32 estimate_depth(u64 p, u32 r) { return estimate_depth_detail(p, r).total(); }

}  // namespace spaceswitch
