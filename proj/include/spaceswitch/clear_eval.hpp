// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_CLEAR_EVAL_HPP
#define SPACESWITCH_CLEAR_EVAL_HPP

#include "spaceswitch/eval.hpp"

namespace spaceswitch {

// Cost-metered cleartext backend: slot vectors over Z_{p^t} with the same
// operation surface and metering as the lattice backend, so circuit costs and
// results can be compared directly. Raising the tag injects a seeded multiple
// of p into each slot, mimicking the garbage digits a real raise exposes.
class ClearEval final : public Evaluator {
 public:
  explicit ClearEval(const ParamSet& ps);

  std::string backend_name() const override { return "clear"; }

  // Serialization hooks: direct slot access, and reconstruction of a handle
  // from stored slots. adopt validates level, tag and slot ranges.
  const std::vector<u64>& raw(const CipherHandle& h) const;
  CipherHandle adopt(std::vector<u64> slots, u32 level, u32 tag_exp);

 protected:
  std::shared_ptr<void> do_encode(const std::vector<u64>& xs) override;
  std::vector<u64> do_decode(const CipherHandle& h) override;
  std::shared_ptr<void> do_add(const CipherHandle& a, const CipherHandle& b, u32 out_level) override;
  std::shared_ptr<void> do_sub(const CipherHandle& a, const CipherHandle& b, u32 out_level) override;
  std::shared_ptr<void> do_mul(const CipherHandle& a, const CipherHandle& b, u32 out_level) override;
  std::shared_ptr<void> do_add_plain(const CipherHandle& a, i64 k) override;
  std::shared_ptr<void> do_mul_plain(const CipherHandle& a, i64 k) override;
  std::shared_ptr<void> do_divide_by_p(const CipherHandle& a) override;
  std::shared_ptr<void> do_change_mod(const CipherHandle& a, u32 new_tag_exp) override;
  std::shared_ptr<void> do_reinterpret_full(const CipherHandle& a) override;

 private:
  struct Slots {
    std::vector<u64> v;
  };
  const Slots& slots_of(const CipherHandle& h) const;
  Rng garbage_;
};

}  // namespace spaceswitch

#endif
