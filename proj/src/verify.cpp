// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/verify.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/compare.hpp"
#include "spaceswitch/interp.hpp"
#include "spaceswitch/reduce.hpp"
#include "spaceswitch/ring.hpp"

namespace spaceswitch {

const char* verify_mode_name(VerifyMode m) {
  switch (m) {
    case VerifyMode::polys:
      return "polys";
    case VerifyMode::digits:
      return "digits";
    case VerifyMode::compare:
      return "compare";
    case VerifyMode::roundtrip:
      return "roundtrip";
  }
  return "polys";
}

VerifyMode verify_mode_from_name(const std::string& name) {
  for (VerifyMode m :
       {VerifyMode::polys, VerifyMode::digits, VerifyMode::compare, VerifyMode::roundtrip}) {
    if (name == verify_mode_name(m)) return m;
  }
  fail(Errc::invalid_argument, "unknown verify mode: " + name);
}

namespace {

constexpr u64 kSampleInputs = 2048;
constexpr u64 kSampleConstants = 48;
constexpr u32 kRoundtripSeeds = 10;

void note(VerifySummary& s, const std::string& what) {
  ++s.failure_count;
  if (s.counterexamples.size() < 8) s.counterexamples.push_back(what);
}

// The whole domain [0, m) when it fits the cap, otherwise a seeded sample
// plus the edges.
std::vector<u64> domain_points(u64 m, u64 seed, bool& exhaustive, u64 sample = kSampleInputs) {
  std::vector<u64> xs;
  if (m <= kVerifyExhaustionCap) {
    exhaustive = true;
    xs.resize(m);
    for (u64 x = 0; x < m; ++x) xs[x] = x;
    return xs;
  }
  exhaustive = false;
  Rng rng(seed);
  xs = {0, 1, m / 2, m - 1};
  while (xs.size() < sample) xs.push_back(rng.uniform(m));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

void verify_polys(VerifySummary& s, u64 p, u32 r, u64 seed) {
  DensePoly feq = build_F_EQ(p);
  DensePoly flt = build_F_LT(p);
  for (u64 x = 0; x < p; ++x) {
    u64 eq = feq.eval(x);
    u64 lt = flt.eval(x);
    u64 want_eq = x == 0 ? 1 : 0;
    u64 want_lt = balanced(x, p) < 0 ? 1 : 0;
    ++s.checked;
    if (eq != want_eq)
      note(s, "equality indicator at x=" + std::to_string(x) + ": got " + std::to_string(eq));
    if (lt != want_lt)
      note(s, "sign indicator at x=" + std::to_string(x) + ": got " + std::to_string(lt));
  }
  for (u32 e = 2; e <= r; ++e) {
    DensePoly g = build_G(p, e);
    u64 m = checked_pow(p, e);
    bool exhausted = true;
    for (u64 x : domain_points(m, seed + e, exhausted)) {
      i64 z0 = balanced(x % p, p);
      u64 want = to_canonical(z0, m);
      ++s.checked;
      if (g.eval(x) != want)
        note(s, retain_poly_name(e) + " at x=" + std::to_string(x) + ": got " +
                    std::to_string(g.eval(x)) + ", want " + std::to_string(want));
    }
    s.exhaustive = s.exhaustive && exhausted;
  }
}

void verify_digits(VerifySummary& s, u64 p, u32 r, u64 seed) {
  u64 m = checked_pow(p, r);
  std::vector<u64> xs = domain_points(m, seed, s.exhaustive);
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = estimate_depth(p, r) + 2;
  ps.slots = xs.size();
  ps.seed = seed;
  ClearEval ev(ps);
  std::vector<CipherHandle> digits = reduce_to_digits(ev, ev.encode_vector(xs));
  std::vector<std::vector<u64>> decoded(digits.size());
  for (std::size_t j = 0; j < digits.size(); ++j) decoded[j] = ev.decode(digits[j]);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<i64> want = base_p_digits(xs[i], p, r);
    ++s.checked;
    for (std::size_t j = 0; j < digits.size(); ++j) {
      if (decoded[j][i] != to_canonical(want[j], p)) {
        note(s, "digit " + std::to_string(j) + " of " + std::to_string(xs[i]) + ": got " +
                    std::to_string(decoded[j][i]) + ", want " +
                    std::to_string(to_canonical(want[j], p)));
        break;
      }
    }
  }
}

bool int_cmp(CmpOp op, u64 a, u64 b) {
  switch (op) {
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
    case CmpOp::eq: return a == b;
    case CmpOp::neq: return a != b;
  }
  return false;
}

void verify_compare(VerifySummary& s, u64 p, u32 r, u64 seed) {
  u64 m = checked_pow(p, r);
  u64 half = (m - 1) / 2;
  std::vector<u64> as = domain_points(m, seed, s.exhaustive);
  bool consts_exhaustive = true;
  std::vector<u64> bs =
      m <= kVerifyExhaustionCap
          ? as
          : domain_points(m, seed ^ 0x9e3779b9, consts_exhaustive, kSampleConstants);
  s.exhaustive = s.exhaustive && consts_exhaustive;

  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = estimate_depth(p, r) + 2;
  ps.slots = as.size();
  ps.seed = seed;
  ClearEval ev(ps);
  CipherHandle packed = ev.encode_vector(as);
  for (CmpOp op : {CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge, CmpOp::eq, CmpOp::neq}) {
    for (u64 b : bs) {
      std::vector<u64> got = ev.decode(compare_const(ev, op, packed, b));
      for (std::size_t i = 0; i < as.size(); ++i) {
        u64 a = as[i];
        u64 diff = a > b ? a - b : b - a;
        if (diff > half) continue;  // outside the exact window by contract
        ++s.checked;
        u64 want = int_cmp(op, a, b) ? 1 : 0;
        if (got[i] != want)
          note(s, std::string(cmp_op_name(op)) + "(" + std::to_string(a) + ", " +
                      std::to_string(b) + "): got " + std::to_string(got[i]));
      }
    }
  }
}

void verify_roundtrip(VerifySummary& s, u64 p, u32 r, u64 seed) {
  u64 m = checked_pow(p, r);
  std::vector<u64> xs;  // everything with a balanced value in (-p/2, p/2]
  for (u64 d = 0; d <= (p - 1) / 2; ++d) xs.push_back(d);
  for (u64 d = 1; d <= (p - 1) / 2; ++d) xs.push_back(m - d);
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = estimate_depth(p, r) + 2;
  ps.slots = xs.size();
  for (u32 g = 0; g < kRoundtripSeeds; ++g) {
    ps.seed = seed + g;
    ClearEval ev(ps);
    CipherHandle down = ev.change_mod_to_p(ev.encode_vector(xs));
    std::vector<u64> up = ev.decode(raise_mod(ev, down));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ++s.checked;
      if (up[i] != xs[i])
        note(s, "seed " + std::to_string(ps.seed) + ", x=" + std::to_string(xs[i]) +
                    ": came back as " + std::to_string(up[i]));
    }
  }
}

}  // namespace

VerifySummary run_verify(VerifyMode mode, u64 p, u32 r, u64 seed) {
  require_odd_prime(p);
  require(r >= 1, Errc::invalid_argument, "need r >= 1");
  VerifySummary s;
  s.mode = mode;
  s.p = p;
  s.r = r;
  switch (mode) {
    case VerifyMode::polys:
      verify_polys(s, p, r, seed);
      break;
    case VerifyMode::digits:
      verify_digits(s, p, r, seed);
      break;
    case VerifyMode::compare:
      verify_compare(s, p, r, seed);
      break;
    case VerifyMode::roundtrip:
      verify_roundtrip(s, p, r, seed);
      break;
  }
  return s;
}

std::string VerifySummary::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["mode"] = verify_mode_name(mode);
  j["p"] = p;
  j["r"] = r;
  j["checked"] = checked;
  j["exhaustive"] = exhaustive;
  j["failures"] = failure_count;
  j["counterexamples"] = counterexamples;
  j["pass"] = pass();
  return j.dump(2);
}

std::string VerifySummary::to_text() const {
  std::ostringstream out;
  out << "verify " << verify_mode_name(mode) << " at (" << p << ", " << r << "): "
      << (pass() ? "PASS" : "FAIL") << ", " << checked << " checks ("
      << (exhaustive ? "exhaustive" : "sampled") << ")\n";
  if (!pass()) {
    out << failure_count << " failures";
    if (!counterexamples.empty()) {
      out << ", first " << counterexamples.size() << ":\n";
      for (const std::string& c : counterexamples) out << "  " << c << "\n";
    } else {
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace spaceswitch
