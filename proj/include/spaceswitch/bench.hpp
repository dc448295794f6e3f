// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_BENCH_HPP
#define SPACESWITCH_BENCH_HPP

#include <string>
#include <vector>

#include "spaceswitch/query.hpp"

namespace spaceswitch {

// One measured less-than pipeline: bitwidth, the strategy label ("direct"
// or an extraction strategy name), the parameters it ran under, and the
// full stage breakdown.
struct BenchRow {
  u32 bitwidth = 0;
  std::string strategy;
  u64 p = 0;
  u32 r = 0;
  u64 modulus = 0;
  CostReport report;
};

struct BenchSkip {
  u32 bitwidth = 0;
  std::string strategy;
  std::string note;
};

struct BenchTable {
  std::vector<BenchRow> rows;
  std::vector<BenchSkip> skipped;

  std::string to_json() const;  // {"schema": 1, ...}
  std::string to_csv() const;
  std::string to_text() const;
};

// Meters one raised less-than comparison per (bitwidth, strategy) pair.
// Tower strategies run at the cheapest measured (p, r >= 2) for the
// bitwidth; "direct" runs at the cheapest single-digit prime, and is
// skipped with a note when none fits the desk-scale table. Counts come
// from the cleartext backend; backend "bgv" re-runs each pipeline on the
// lattice backend for wall-clock and noise reality (the counts match).
BenchTable run_bench(const std::vector<u32>& bitwidths,
                     const std::vector<std::string>& strategies,
                     const std::string& backend = "clear", u64 seed = 1);

}  // namespace spaceswitch

#endif
