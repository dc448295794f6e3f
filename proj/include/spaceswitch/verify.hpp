// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_VERIFY_HPP
#define SPACESWITCH_VERIFY_HPP

#include <string>
#include <vector>

#include "spaceswitch/common.hpp"

namespace spaceswitch {

// Self-check harnesses exposed through the CLI. Failures are report
// content, not exceptions: a counterexample means the build is broken and
// the caller decides how loudly to say so.
enum class VerifyMode { polys, digits, compare, roundtrip };

const char* verify_mode_name(VerifyMode m);
VerifyMode verify_mode_from_name(const std::string& name);

// Domains up to this size are enumerated completely; larger ones get a
// seeded sample.
inline constexpr u64 kVerifyExhaustionCap = 3125;

struct VerifySummary {
  VerifyMode mode = VerifyMode::polys;
  u64 p = 0;
  u32 r = 0;
  u64 checked = 0;
  bool exhaustive = true;
  u64 failure_count = 0;
  std::vector<std::string> counterexamples;  // first few, for the report

  bool pass() const { return failure_count == 0; }
  std::string to_json() const;
  std::string to_text() const;
};

//  polys     digit-retain congruence for every e <= r, plus the equality
//            and less-than indicators on Z_p
//  digits    full digit extraction against the balanced base-p oracle
//  compare   all six operators against integer semantics on in-window pairs
//  roundtrip raise after reduce is the identity on small balanced values,
//            across ten garbage seeds derived from `seed`
VerifySummary run_verify(VerifyMode mode, u64 p, u32 r, u64 seed = 1);

}  // namespace spaceswitch

#endif
