// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_EVAL_HPP
#define SPACESWITCH_EVAL_HPP

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "spaceswitch/common.hpp"

namespace spaceswitch {

// Shared parameter block for every backend. The cleartext backend uses the
// first five fields; the lattice backend additionally consumes the knobs
// below them.
struct ParamSet {
  u64 p = 0;             // odd prime digit base
  u32 r = 0;             // plaintext space is Z_{p^r}
  u32 levels = 0;        // multiplicative depth budget
  std::size_t slots = 1; // vector width (cleartext backend; lattice packs 1)
  u64 seed = 1;

  std::size_t ring_dim = 64;  // power of two
  double sigma = 3.2;
  u32 prime_bits = 40;   // size of each chain modulus
  u32 relin_window = 20; // gadget digit width in bits
};

struct CostCounts {
  u64 nonscalar_mults = 0;
  u64 scalar_mults = 0;
  u64 additions = 0;

  CostCounts& operator+=(const CostCounts& o) {
    nonscalar_mults += o.nonscalar_mults;
    scalar_mults += o.scalar_mults;
    additions += o.additions;
    return *this;
  }
};

// Operation meter. Totals are atomics so concurrent pipelines can share one
// ledger; the stage/polynomial breakdowns take a lock. Stage attribution is
// scoped via StageScope; anything outside an explicit scope lands in
// "arithmetic".
class CostLedger {
 public:
  void tally_nonscalar() {
    nonscalar_.fetch_add(1, std::memory_order_relaxed);
    bump([](CostCounts& c) { ++c.nonscalar_mults; });
  }
  void tally_scalar() {
    scalar_.fetch_add(1, std::memory_order_relaxed);
    bump([](CostCounts& c) { ++c.scalar_mults; });
  }
  void tally_addition() {
    additions_.fetch_add(1, std::memory_order_relaxed);
    bump([](CostCounts& c) { ++c.additions; });
  }
  void observe_depth(u32 consumed) {
    u32 cur = max_depth_.load(std::memory_order_relaxed);
    while (consumed > cur && !max_depth_.compare_exchange_weak(cur, consumed)) {
    }
  }
  void tally_poly(const std::string& name) {
    std::lock_guard<std::mutex> lk(mu_);
    ++polys_[name];
  }

  CostCounts totals() const {
    CostCounts c;
    c.nonscalar_mults = nonscalar_.load();
    c.scalar_mults = scalar_.load();
    c.additions = additions_.load();
    return c;
  }
  u32 max_depth_consumed() const { return max_depth_.load(); }
  std::map<std::string, CostCounts> per_stage() const {
    std::lock_guard<std::mutex> lk(mu_);
    return stages_;
  }
  std::map<std::string, u64> poly_evals() const {
    std::lock_guard<std::mutex> lk(mu_);
    return polys_;
  }
  std::string current_stage() const {
    std::lock_guard<std::mutex> lk(mu_);
    return stack_.empty() ? std::string("arithmetic") : stack_.back();
  }

  void reset() {
    std::lock_guard<std::mutex> lk(mu_);
    nonscalar_ = 0;
    scalar_ = 0;
    additions_ = 0;
    max_depth_ = 0;
    stages_.clear();
    polys_.clear();
  }

 private:
  friend class StageScope;
  void push_stage(const std::string& s) {
    std::lock_guard<std::mutex> lk(mu_);
    stack_.push_back(s);
  }
  void pop_stage() {
    std::lock_guard<std::mutex> lk(mu_);
    if (!stack_.empty()) stack_.pop_back();
  }
  template <typename F>
  void bump(F f) {
    std::lock_guard<std::mutex> lk(mu_);
    f(stages_[stack_.empty() ? "arithmetic" : stack_.back()]);
  }

  std::atomic<u64> nonscalar_{0}, scalar_{0}, additions_{0};
  std::atomic<u32> max_depth_{0};
  mutable std::mutex mu_;
  std::vector<std::string> stack_;
  std::map<std::string, CostCounts> stages_;
  std::map<std::string, u64> polys_;
};

class StageScope {
 public:
  StageScope(CostLedger& ledger, std::string name) : ledger_(ledger) { ledger_.push_stage(std::move(name)); }
  ~StageScope() { ledger_.pop_stage(); }
  StageScope(const StageScope&) = delete;
  StageScope& operator=(const StageScope&) = delete;

 private:
  CostLedger& ledger_;
};

class Evaluator;

// Opaque ciphertext reference. `tag_exp` is the exponent t of the plaintext
// modulus p^t; `level` is the remaining multiplicative budget.
struct CipherHandle {
  std::shared_ptr<void> impl;
  Evaluator* owner = nullptr;
  u32 level = 0;
  u32 tag_exp = 0;

  bool valid() const { return impl != nullptr; }
};

// Backend-neutral evaluation interface. Public entry points validate handles
// and meter costs; backends implement the do_* hooks.
class Evaluator {
 public:
  explicit Evaluator(const ParamSet& ps);
  virtual ~Evaluator() = default;

  virtual std::string backend_name() const = 0;
  const ParamSet& params() const { return ps_; }
  CostLedger& ledger() { return ledger_; }
  const CostLedger& ledger() const { return ledger_; }

  u64 tag_modulus(u32 tag_exp) const;

  // Fresh encryption/encoding of canonical values mod p^r, full level, tag r.
  CipherHandle encode_vector(const std::vector<u64>& xs);
  std::vector<u64> decode(const CipherHandle& h);

  CipherHandle add(const CipherHandle& a, const CipherHandle& b);
  CipherHandle sub(const CipherHandle& a, const CipherHandle& b);
  CipherHandle mul(const CipherHandle& a, const CipherHandle& b);
  CipherHandle add_plain(const CipherHandle& a, i64 k);
  CipherHandle mul_plain(const CipherHandle& a, i64 k);

  // Exact division of the message by p: requires tag_exp >= 2 and a message
  // divisible by p. Tag drops by one; the noise is untouched.
  CipherHandle divide_by_p(const CipherHandle& a);

  // Reinterpret under a smaller plaintext modulus p^new_tag. Free.
  CipherHandle change_mod(const CipherHandle& a, u32 new_tag_exp);
  CipherHandle change_mod_to_p(const CipherHandle& a) { return change_mod(a, 1); }

  // Reinterpret a tag-p ciphertext under the full modulus p^r. The message's
  // upper digits become unspecified garbage of the form p * g; only the
  // residue mod p is preserved. Free of ciphertext operations.
  CipherHandle reinterpret_full_tag(const CipherHandle& a);

 protected:
  virtual std::shared_ptr<void> do_encode(const std::vector<u64>& xs) = 0;
  virtual std::vector<u64> do_decode(const CipherHandle& h) = 0;
  virtual std::shared_ptr<void> do_add(const CipherHandle& a, const CipherHandle& b, u32 out_level) = 0;
  virtual std::shared_ptr<void> do_sub(const CipherHandle& a, const CipherHandle& b, u32 out_level) = 0;
  virtual std::shared_ptr<void> do_mul(const CipherHandle& a, const CipherHandle& b, u32 out_level) = 0;
  virtual std::shared_ptr<void> do_add_plain(const CipherHandle& a, i64 k) = 0;
  virtual std::shared_ptr<void> do_mul_plain(const CipherHandle& a, i64 k) = 0;
  virtual std::shared_ptr<void> do_divide_by_p(const CipherHandle& a) = 0;
  virtual std::shared_ptr<void> do_change_mod(const CipherHandle& a, u32 new_tag_exp) = 0;
  virtual std::shared_ptr<void> do_reinterpret_full(const CipherHandle& a) = 0;

  void check_owned(const CipherHandle& h) const;
  void check_pair(const CipherHandle& a, const CipherHandle& b) const;
  CipherHandle wrap(std::shared_ptr<void> impl, u32 level, u32 tag_exp);

  ParamSet ps_;
  CostLedger ledger_;
  std::vector<u64> tag_mods_;  // p^0 .. p^r
};

}  // namespace spaceswitch

#endif
