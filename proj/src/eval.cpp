// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/eval.hpp"

namespace spaceswitch {

Evaluator::Evaluator(const ParamSet& ps) : ps_(ps) {
  require_odd_prime(ps_.p);
  require(ps_.r >= 1, Errc::invalid_argument, "Evaluator: need r >= 1");
  require(ps_.levels >= 1, Errc::invalid_argument, "Evaluator: need at least one level");
  require(ps_.slots >= 1, Errc::invalid_argument, "Evaluator: need at least one slot");
  tag_mods_.resize(ps_.r + 1);
  tag_mods_[0] = 1;
  for (u32 t = 1; t <= ps_.r; ++t) tag_mods_[t] = checked_pow(ps_.p, t);
}

u64 Evaluator::tag_modulus(u32 tag_exp) const {
  require(tag_exp >= 1 && tag_exp <= ps_.r, Errc::invalid_argument, "tag exponent out of range");
  return tag_mods_[tag_exp];
}

void Evaluator::check_owned(const CipherHandle& h) const {
  require(h.valid(), Errc::invalid_argument, "invalid ciphertext handle");
  require(h.owner == this, Errc::invalid_argument, "handle belongs to a different evaluator");
}

void Evaluator::check_pair(const CipherHandle& a, const CipherHandle& b) const {
  check_owned(a);
  check_owned(b);
  require(a.tag_exp == b.tag_exp, Errc::invalid_argument,
          "plaintext moduli differ (tags " + std::to_string(a.tag_exp) + " vs " +
              std::to_string(b.tag_exp) + ")");
}

CipherHandle Evaluator::wrap(std::shared_ptr<void> impl, u32 level, u32 tag_exp) {
  CipherHandle h;
  h.impl = std::move(impl);
  h.owner = this;
  h.level = level;
  h.tag_exp = tag_exp;
  ledger_.observe_depth(ps_.levels - level);
  return h;
}

CipherHandle Evaluator::encode_vector(const std::vector<u64>& xs) {
  require(!xs.empty(), Errc::invalid_argument, "encode_vector: empty input");
  require(xs.size() <= ps_.slots, Errc::invalid_argument, "encode_vector: more values than slots");
  u64 m = tag_mods_[ps_.r];
  for (u64 x : xs) require(x < m, Errc::invalid_argument, "encode_vector: value outside Z_{p^r}");
  return wrap(do_encode(xs), ps_.levels, ps_.r);
}

std::vector<u64> Evaluator::decode(const CipherHandle& h) {
  check_owned(h);
  return do_decode(h);
}

CipherHandle Evaluator::add(const CipherHandle& a, const CipherHandle& b) {
  check_pair(a, b);
  u32 lvl = std::min(a.level, b.level);
  ledger_.tally_addition();
  return wrap(do_add(a, b, lvl), lvl, a.tag_exp);
}

CipherHandle Evaluator::sub(const CipherHandle& a, const CipherHandle& b) {
  check_pair(a, b);
  u32 lvl = std::min(a.level, b.level);
  ledger_.tally_addition();
  return wrap(do_sub(a, b, lvl), lvl, a.tag_exp);
}

CipherHandle Evaluator::mul(const CipherHandle& a, const CipherHandle& b) {
  check_pair(a, b);
  require(a.level >= 1 && b.level >= 1, Errc::invalid_argument,
          "mul: multiplicative depth budget exhausted");
  u32 lvl = std::min(a.level, b.level) - 1;
  ledger_.tally_nonscalar();
  return wrap(do_mul(a, b, lvl), lvl, a.tag_exp);
}

CipherHandle Evaluator::add_plain(const CipherHandle& a, i64 k) {
  check_owned(a);
  ledger_.tally_addition();
  return wrap(do_add_plain(a, k), a.level, a.tag_exp);
}

CipherHandle Evaluator::mul_plain(const CipherHandle& a, i64 k) {
  check_owned(a);
  ledger_.tally_scalar();
  return wrap(do_mul_plain(a, k), a.level, a.tag_exp);
}

CipherHandle Evaluator::divide_by_p(const CipherHandle& a) {
  check_owned(a);
  require(a.tag_exp >= 2, Errc::invalid_argument, "divide_by_p: tag already at p");
  ledger_.tally_scalar();
  return wrap(do_divide_by_p(a), a.level, a.tag_exp - 1);
}

CipherHandle Evaluator::change_mod(const CipherHandle& a, u32 new_tag_exp) {
  check_owned(a);
  require(new_tag_exp >= 1 && new_tag_exp <= a.tag_exp, Errc::invalid_argument,
          "change_mod: can only lower the plaintext modulus");
  if (new_tag_exp == a.tag_exp) return a;
  return wrap(do_change_mod(a, new_tag_exp), a.level, new_tag_exp);
}

CipherHandle Evaluator::reinterpret_full_tag(const CipherHandle& a) {
  check_owned(a);
  require(a.tag_exp == 1, Errc::invalid_argument, "reinterpret_full_tag: input must sit at tag p");
  return wrap(do_reinterpret_full(a), a.level, ps_.r);
}

}  // namespace spaceswitch
