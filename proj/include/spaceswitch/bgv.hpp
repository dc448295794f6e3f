// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_BGV_HPP
#define SPACESWITCH_BGV_HPP

#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spaceswitch/eval.hpp"
#include "spaceswitch/ring.hpp"

namespace spaceswitch {

// A ciphertext over R_Q = Z_Q[x]/(x^n + 1): decrypts to c0 + c1*s, whose
// constant coefficient is m + p^t * e for the handle's tag exponent t.
// `level` indexes the modulus chain; both ring elements live mod Q_level.
struct BgvCiphertext {
  RingElem c0;
  RingElem c1;
  u32 level = 0;
};

// Key material and modulus-chain bookkeeping for the toy lattice backend.
//
// The chain holds `levels + 1` distinct primes, each congruent to 1 mod p^r
// so that dividing by a chain prime fixes the plaintext residue. Q_l is the
// product of the first l+1 primes; every multiplication drops one prime.
//
// Parameters are deliberately tiny (ring_dim defaults to 64). They give no
// cryptographic security and exist to exercise the arithmetic with real
// noise growth; do not protect data with them.
class BgvContext {
 public:
  // secret_weight overrides the default ternary Hamming weight of
  // min(ring_dim / 4, 64); weight 0 (zero key) is allowed for diagnostics.
  explicit BgvContext(const ParamSet& ps, std::size_t secret_weight = kDefaultWeight);

  const ParamSet& params() const { return ps_; }
  const std::vector<u64>& chain() const { return chain_; }
  const BigInt& modulus_at(u32 level) const;
  std::size_t ring_dim() const { return ps_.ring_dim; }
  const std::vector<i64>& secret_key() const { return s_; }

  BgvCiphertext encrypt(u64 m, Rng& rng) const;

  // Throws Errc::verification when the noise has swallowed the modulus and
  // the result would be wrap garbage.
  u64 decrypt(const BgvCiphertext& ct, u32 tag_exp) const;

  // log2 of headroom between the largest noise coefficient and the wrap
  // boundary Q/2. Positive exactly when decryption is reliable.
  double noise_budget_bits(const BgvCiphertext& ct) const;

  static constexpr std::size_t kDefaultWeight = static_cast<std::size_t>(-1);

  // Drop one chain prime. Exact on the plaintext because every chain prime
  // is 1 mod p^r; shrinks noise by roughly that prime.
  BgvCiphertext mod_switch(const BgvCiphertext& ct, u32 tag_exp) const;
  BgvCiphertext to_level(const BgvCiphertext& ct, u32 level, u32 tag_exp) const;

  // Tensor product followed by gadget relinearization at the operands'
  // common level, then one switch down to out_level.
  BgvCiphertext mul(const BgvCiphertext& a, const BgvCiphertext& b, u32 tag_exp,
                    u32 out_level) const;

  BgvCiphertext add(const BgvCiphertext& a, const BgvCiphertext& b, u32 tag_exp,
                    u32 out_level, bool negate_b) const;
  BgvCiphertext add_constant(const BgvCiphertext& ct, i64 k, u32 tag_exp) const;
  BgvCiphertext mul_constant(const BgvCiphertext& ct, i64 k, u32 tag_exp) const;

  // Multiply by the inverse of p mod Q. Exact division of the decrypted
  // value when it is divisible by p; silent garbage otherwise, which is why
  // callers must establish divisibility first (the cleartext backend can
  // check and throw; this one cannot see the value).
  BgvCiphertext divide_by_p(const BgvCiphertext& ct) const;

 private:
  void build_chain();
  void keygen(std::size_t secret_weight);
  const std::vector<std::pair<RingElem, RingElem>>& evk_at(u32 level) const;
  RingElem noise_times(u64 scale, Rng& rng) const;
  void debug_check(const BgvCiphertext& ct) const;

  ParamSet ps_;
  std::vector<u64> chain_;
  std::vector<BigInt> q_prod_;
  std::vector<i64> s_;
  RingElem s_squared_{1, BigInt(2)};
  std::vector<std::pair<RingElem, RingElem>> evk_;
  mutable std::mutex evk_mu_;
  mutable std::unordered_map<u32, std::vector<std::pair<RingElem, RingElem>>> evk_cache_;
};

// Evaluator backend over BgvContext. One plaintext slot per ciphertext.
// Thread-safe for concurrent evaluation of independent handles.
class BgvEval final : public Evaluator {
 public:
  explicit BgvEval(const ParamSet& ps);

  std::string backend_name() const override { return "bgv"; }
  const BgvContext& context() const { return ctx_; }

  double noise_budget_bits(const CipherHandle& h) const;
  const BgvCiphertext& raw(const CipherHandle& h) const;
  CipherHandle adopt(BgvCiphertext ct, u32 level, u32 tag_exp);

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
  const BgvCiphertext& ct(const CipherHandle& h) const;

  BgvContext ctx_;
  std::mutex rng_mu_;
  Rng rng_;
};

}  // namespace spaceswitch

#endif
