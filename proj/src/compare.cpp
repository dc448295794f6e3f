// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/compare.hpp"

#include "spaceswitch/interp.hpp"
#include "spaceswitch/ps_eval.hpp"

namespace spaceswitch {

namespace {

// Sign verdict of a digit-decomposed difference: the topmost nonzero digit
// decides, so verdict = sum_i LT(d_i) * prod_{j>i} EQ(d_j). Walking the sum
// from the top digit down shares one running equality product; EQ(d_0) is
// never needed. 2r-3 nonscalar mults for r >= 2.
CipherHandle lt_of_diff(Evaluator& ev, const CipherHandle& diff, const CompareOptions& opt) {
  const u64 p = ev.params().p;
  const u32 r = ev.params().r;
  auto digits = reduce_to_digits(ev, diff, opt.strategy);

  std::vector<CipherHandle> lt(r), eq(r);  // eq[0] stays empty
  {
    StageScope scope(ev.ledger(), "digit-compare");
    const DensePoly flt = build_F_LT(p);
    const DensePoly feq = build_F_EQ(p);
    for (u32 i = 0; i < r; ++i) {
      if (opt.share_power_cache) {
        PowerCache cache(ev, digits[i]);
        lt[i] = ps_eval_cached(flt, cache, "less_than");
        if (i >= 1) eq[i] = ps_eval_cached(feq, cache, "equal_zero");
      } else {
        lt[i] = ps_eval(ev, flt, digits[i], "less_than");
        if (i >= 1) eq[i] = ps_eval(ev, feq, digits[i], "equal_zero");
      }
    }
  }

  StageScope scope(ev.ledger(), "aggregation");
  CipherHandle acc = lt[r - 1];
  if (r >= 2) {
    CipherHandle prod = eq[r - 1];
    for (u32 i = r - 1; i-- > 0;) {
      acc = ev.add(acc, ev.mul(lt[i], prod));
      if (i > 0) prod = ev.mul(prod, eq[i]);
    }
  }
  return acc;
}

// Zero verdict: the conjunction of per-digit equality bits, multiplied as a
// balanced tree. r-1 nonscalar mults.
CipherHandle eq_of_diff(Evaluator& ev, const CipherHandle& diff, const CompareOptions& opt) {
  const u64 p = ev.params().p;
  auto digits = reduce_to_digits(ev, diff, opt.strategy);

  std::vector<CipherHandle> eq;
  eq.reserve(digits.size());
  {
    StageScope scope(ev.ledger(), "digit-compare");
    const DensePoly feq = build_F_EQ(p);
    for (const CipherHandle& d : digits) eq.push_back(ps_eval(ev, feq, d, "equal_zero"));
  }

  StageScope scope(ev.ledger(), "aggregation");
  while (eq.size() > 1) {
    std::vector<CipherHandle> next;
    next.reserve(eq.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < eq.size(); i += 2) next.push_back(ev.mul(eq[i], eq[i + 1]));
    if (eq.size() % 2 != 0) next.push_back(eq.back());
    eq = std::move(next);
  }
  return eq[0];
}

CipherHandle verdict_of_diff(Evaluator& ev, CmpOp op, const CipherHandle& diff,
                             const CompareOptions& opt) {
  bool is_eq_family = (op == CmpOp::eq || op == CmpOp::neq);
  CipherHandle v = is_eq_family ? eq_of_diff(ev, diff, opt) : lt_of_diff(ev, diff, opt);
  if (op == CmpOp::ge || op == CmpOp::le || op == CmpOp::neq) {
    v = ev.add_plain(ev.mul_plain(v, -1), 1);
  }
  if (opt.raise_result) v = raise_mod(ev, v);
  return v;
}

bool swaps_operands(CmpOp op) { return op == CmpOp::gt || op == CmpOp::le; }

}  // namespace

const char* cmp_op_name(CmpOp op) {
  switch (op) {
    case CmpOp::lt:
      return "lt";
    case CmpOp::le:
      return "le";
    case CmpOp::gt:
      return "gt";
    case CmpOp::ge:
      return "ge";
    case CmpOp::eq:
      return "eq";
    case CmpOp::neq:
      return "neq";
  }
  return "lt";
}

CmpOp cmp_op_from_name(const std::string& name) {
  for (CmpOp op : {CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge, CmpOp::eq, CmpOp::neq}) {
    if (name == cmp_op_name(op)) return op;
  }
  fail(Errc::invalid_argument, "unknown comparison op: " + name);
}

CipherHandle compare(Evaluator& ev, CmpOp op, const CipherHandle& a, const CipherHandle& b,
                     const CompareOptions& opt) {
  const u32 r = ev.params().r;
  require(a.tag_exp == r && b.tag_exp == r, Errc::invalid_argument,
          "compare expects full-tag operands");
  CipherHandle diff = swaps_operands(op) ? ev.sub(b, a) : ev.sub(a, b);
  return verdict_of_diff(ev, op, diff, opt);
}

CipherHandle compare_const(Evaluator& ev, CmpOp op, const CipherHandle& a, u64 k,
                           const CompareOptions& opt) {
  const u32 r = ev.params().r;
  const u64 m = ev.tag_modulus(r);
  require(a.tag_exp == r, Errc::invalid_argument, "compare expects a full-tag operand");
  require(k < m, Errc::invalid_argument, "comparison constant must be canonical mod p^r");
  i64 kb = balanced(k, m);
  CipherHandle diff =
      swaps_operands(op) ? ev.add_plain(ev.mul_plain(a, -1), kb) : ev.add_plain(a, -kb);
  return verdict_of_diff(ev, op, diff, opt);
}

}  // namespace spaceswitch
