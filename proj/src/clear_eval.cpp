// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/clear_eval.hpp"

namespace spaceswitch {

ClearEval::ClearEval(const ParamSet& ps) : Evaluator(ps), garbage_(ps.seed) {}

const ClearEval::Slots& ClearEval::slots_of(const CipherHandle& h) const {
  return *static_cast<const Slots*>(h.impl.get());
}

const std::vector<u64>& ClearEval::raw(const CipherHandle& h) const {
  check_owned(h);
  return slots_of(h).v;
}

CipherHandle ClearEval::adopt(std::vector<u64> slots, u32 level, u32 tag_exp) {
  require(level <= ps_.levels, Errc::invalid_argument, "ClearEval: adopt level beyond budget");
  require(tag_exp >= 1 && tag_exp <= ps_.r, Errc::invalid_argument, "ClearEval: adopt tag out of range");
  u64 m = tag_modulus(tag_exp);
  for (u64 x : slots)
    require(x < m, Errc::invalid_argument, "ClearEval: adopt slot value out of range");
  return wrap(std::make_shared<Slots>(Slots{std::move(slots)}), level, tag_exp);
}

std::shared_ptr<void> ClearEval::do_encode(const std::vector<u64>& xs) {
  return std::make_shared<Slots>(Slots{xs});
}

std::vector<u64> ClearEval::do_decode(const CipherHandle& h) { return slots_of(h).v; }

std::shared_ptr<void> ClearEval::do_add(const CipherHandle& a, const CipherHandle& b, u32) {
  const auto &va = slots_of(a).v, &vb = slots_of(b).v;
  require(va.size() == vb.size(), Errc::invalid_argument, "slot count mismatch");
  u64 m = tag_modulus(a.tag_exp);
  Slots out{va};
  for (std::size_t i = 0; i < va.size(); ++i) out.v[i] = addmod(va[i], vb[i], m);
  return std::make_shared<Slots>(std::move(out));
}

std::shared_ptr<void> ClearEval::do_sub(const CipherHandle& a, const CipherHandle& b, u32) {
  const auto &va = slots_of(a).v, &vb = slots_of(b).v;
  require(va.size() == vb.size(), Errc::invalid_argument, "slot count mismatch");
  u64 m = tag_modulus(a.tag_exp);
  Slots out{va};
  for (std::size_t i = 0; i < va.size(); ++i) out.v[i] = submod(va[i], vb[i], m);
  return std::make_shared<Slots>(std::move(out));
}

std::shared_ptr<void> ClearEval::do_mul(const CipherHandle& a, const CipherHandle& b, u32) {
  const auto &va = slots_of(a).v, &vb = slots_of(b).v;
  require(va.size() == vb.size(), Errc::invalid_argument, "slot count mismatch");
  u64 m = tag_modulus(a.tag_exp);
  Slots out{va};
  for (std::size_t i = 0; i < va.size(); ++i) out.v[i] = mulmod(va[i], vb[i], m);
  return std::make_shared<Slots>(std::move(out));
}

std::shared_ptr<void> ClearEval::do_add_plain(const CipherHandle& a, i64 k) {
  u64 m = tag_modulus(a.tag_exp);
  u64 kc = to_canonical(k, m);
  Slots out{slots_of(a).v};
  for (auto& x : out.v) x = addmod(x, kc, m);
  return std::make_shared<Slots>(std::move(out));
}

std::shared_ptr<void> ClearEval::do_mul_plain(const CipherHandle& a, i64 k) {
  u64 m = tag_modulus(a.tag_exp);
  u64 kc = to_canonical(k, m);
  Slots out{slots_of(a).v};
  for (auto& x : out.v) x = mulmod(x, kc, m);
  return std::make_shared<Slots>(std::move(out));
}

std::shared_ptr<void> ClearEval::do_divide_by_p(const CipherHandle& a) {
  u64 m = tag_modulus(a.tag_exp);
  u64 m_next = m / ps_.p;
  Slots out{slots_of(a).v};
  for (auto& x : out.v) {
    // The cleartext backend can see the message, so a violated divisibility
    // precondition surfaces here; the lattice backend would produce garbage.
    require(x % ps_.p == 0, Errc::invalid_argument, "divide_by_p: message not divisible by p");
    x = (x / ps_.p) % m_next;
  }
  return std::make_shared<Slots>(std::move(out));
}

std::shared_ptr<void> ClearEval::do_change_mod(const CipherHandle& a, u32 new_tag_exp) {
  u64 m = tag_modulus(new_tag_exp);
  Slots out{slots_of(a).v};
  for (auto& x : out.v) x %= m;
  return std::make_shared<Slots>(std::move(out));
}

std::shared_ptr<void> ClearEval::do_reinterpret_full(const CipherHandle& a) {
  u64 m = tag_modulus(ps_.r);
  u64 upper = m / ps_.p;
  Slots out{slots_of(a).v};
  for (auto& x : out.v) x = (x + ps_.p * garbage_.uniform(upper)) % m;
  return std::make_shared<Slots>(std::move(out));
}

}  // namespace spaceswitch
