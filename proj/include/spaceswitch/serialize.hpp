// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_SERIALIZE_HPP
#define SPACESWITCH_SERIALIZE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "spaceswitch/eval.hpp"

namespace spaceswitch {

// Portable binary ciphertext image. Fixed little-endian header
//   magic "SSWC" | version u32 | backend u32 | p u64 | r u32 | n u64 |
//   level u32 | tag u32
// followed by the coefficient payload: one u64 per slot for the cleartext
// backend; for the lattice backend a u32 per-coefficient byte width, then
// c0 and c1 as n fixed-width little-endian values each.
//
// Keys are never written. A context rebuilt from the same ParamSet (seed
// included) regenerates the key material and can decrypt what it saved.
std::vector<unsigned char> serialize_cipher(Evaluator& ev, const CipherHandle& h);

// Rejects bad magic or version, a backend mismatch, parameters that differ
// from ev's, out-of-range fields or coefficients, and size mismatches.
// Every rejection throws Errc::io.
CipherHandle deserialize_cipher(Evaluator& ev, const unsigned char* data, std::size_t size);
CipherHandle deserialize_cipher(Evaluator& ev, const std::vector<unsigned char>& bytes);

void save_cipher(Evaluator& ev, const CipherHandle& h, const std::string& path);
CipherHandle load_cipher(Evaluator& ev, const std::string& path);

// ParamSet as a flat JSON object and back. The CLI stores this beside saved
// ciphertexts so a later invocation can rebuild the same context.
std::string params_to_json(const ParamSet& ps);
ParamSet params_from_json(const std::string& text);

}  // namespace spaceswitch

#endif
