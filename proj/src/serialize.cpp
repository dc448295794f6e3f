// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/serialize.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "spaceswitch/bgv.hpp"
#include "spaceswitch/clear_eval.hpp"

namespace spaceswitch {

namespace {

constexpr unsigned char kMagic[4] = {'S', 'S', 'W', 'C'};
constexpr u32 kVersion = 1;
constexpr u32 kBackendClear = 0;
constexpr u32 kBackendBgv = 1;

void put_u32(std::vector<unsigned char>& out, u32 v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u64(std::vector<unsigned char>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_big(std::vector<unsigned char>& out, BigInt v, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) {
    out.push_back(static_cast<unsigned char>((v & 0xff).convert_to<unsigned>()));
    v >>= 8;
  }
}

// Bytes needed to hold any value in [0, q).
std::size_t byte_width(const BigInt& q) {
  std::size_t w = 1;
  BigInt t = q - 1;
  while ((t >>= 8) > 0) ++w;
  return w;
}

struct Reader {
  const unsigned char* data;
  std::size_t size;
  std::size_t at = 0;

  void need(std::size_t bytes) const {
    require(size - at >= bytes && bytes <= size, Errc::io, "ciphertext image truncated");
  }
  // Overflow-safe capacity check for count items of item_bytes each.
  void need_items(u64 count, std::size_t item_bytes) const {
    require(count <= (size - at) / item_bytes, Errc::io, "ciphertext image truncated");
  }
  u32 read_u32() {
    need(4);
    u32 v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<u32>(data[at + i]) << (8 * i);
    at += 4;
    return v;
  }
  u64 read_u64() {
    need(8);
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(data[at + i]) << (8 * i);
    at += 8;
    return v;
  }
  BigInt read_big(std::size_t width) {
    need(width);
    BigInt v = 0;
    for (std::size_t i = width; i-- > 0;) {
      v <<= 8;
      v += data[at + i];
    }
    at += width;
    return v;
  }
};

}  // namespace

std::vector<unsigned char> serialize_cipher(Evaluator& ev, const CipherHandle& h) {
  require(h.valid() && h.owner == &ev, Errc::invalid_argument,
          "serialize_cipher: handle does not belong to this evaluator");
  auto* bgv = dynamic_cast<BgvEval*>(&ev);
  auto* clear = dynamic_cast<ClearEval*>(&ev);
  require(bgv || clear, Errc::invalid_argument,
          "serialize_cipher: no binary format for backend " + ev.backend_name());

  const ParamSet& ps = ev.params();
  u64 n = bgv ? static_cast<u64>(bgv->context().ring_dim()) : clear->raw(h).size();

  std::vector<unsigned char> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, bgv ? kBackendBgv : kBackendClear);
  put_u64(out, ps.p);
  put_u32(out, ps.r);
  put_u64(out, n);
  put_u32(out, h.level);
  put_u32(out, h.tag_exp);

  if (bgv) {
    const BgvCiphertext& ct = bgv->raw(h);
    std::size_t width = byte_width(ct.c0.q());
    put_u32(out, static_cast<u32>(width));
    for (const RingElem* e : {&ct.c0, &ct.c1})
      for (std::size_t i = 0; i < e->n(); ++i) put_big(out, (*e)[i], width);
  } else {
    for (u64 x : clear->raw(h)) put_u64(out, x);
  }
  return out;
}

CipherHandle deserialize_cipher(Evaluator& ev, const unsigned char* data, std::size_t size) {
  Reader rd{data, size, 0};
  rd.need(4);
  require(std::memcmp(data, kMagic, 4) == 0, Errc::io, "not a ciphertext image (bad magic)");
  rd.at = 4;
  u32 version = rd.read_u32();
  require(version == kVersion, Errc::io,
          "unsupported ciphertext image version " + std::to_string(version));
  u32 backend = rd.read_u32();
  u64 p = rd.read_u64();
  u32 r = rd.read_u32();
  u64 n = rd.read_u64();
  u32 level = rd.read_u32();
  u32 tag = rd.read_u32();

  const ParamSet& ps = ev.params();
  require(p == ps.p && r == ps.r, Errc::io,
          "ciphertext image is for p=" + std::to_string(p) + " r=" + std::to_string(r) +
              ", this context uses p=" + std::to_string(ps.p) + " r=" + std::to_string(ps.r));
  require(level <= ps.levels, Errc::io, "ciphertext image level exceeds this context's chain");
  require(tag >= 1 && tag <= r, Errc::io, "ciphertext image tag out of range");

  if (auto* bgv = dynamic_cast<BgvEval*>(&ev)) {
    require(backend == kBackendBgv, Errc::io,
            "ciphertext image was written by a different backend");
    require(n == bgv->context().ring_dim(), Errc::io,
            "ciphertext image ring dimension mismatch");
    const BigInt& q = bgv->context().modulus_at(level);
    std::size_t width = rd.read_u32();
    require(width == byte_width(q), Errc::io,
            "coefficient width does not match this context's modulus chain");
    rd.need_items(2 * n, width);
    BgvCiphertext ct;
    ct.level = level;
    ct.c0 = RingElem(n, q);
    ct.c1 = RingElem(n, q);
    for (RingElem* e : {&ct.c0, &ct.c1}) {
      for (std::size_t i = 0; i < n; ++i) {
        BigInt v = rd.read_big(width);
        require(v < q, Errc::io, "ciphertext image coefficient exceeds the modulus");
        e->set(i, v);
      }
    }
    require(rd.at == rd.size, Errc::io, "trailing bytes after ciphertext image");
    return bgv->adopt(std::move(ct), level, tag);
  }

  auto* clear = dynamic_cast<ClearEval*>(&ev);
  require(clear != nullptr, Errc::invalid_argument,
          "deserialize_cipher: no binary format for backend " + ev.backend_name());
  require(backend == kBackendClear, Errc::io,
          "ciphertext image was written by a different backend");
  rd.need_items(n, 8);
  u64 m = ev.tag_modulus(tag);
  std::vector<u64> slots(n);
  for (auto& x : slots) {
    x = rd.read_u64();
    require(x < m, Errc::io, "ciphertext image slot value exceeds the tag modulus");
  }
  require(rd.at == rd.size, Errc::io, "trailing bytes after ciphertext image");
  return clear->adopt(std::move(slots), level, tag);
}

CipherHandle deserialize_cipher(Evaluator& ev, const std::vector<unsigned char>& bytes) {
  return deserialize_cipher(ev, bytes.data(), bytes.size());
}

void save_cipher(Evaluator& ev, const CipherHandle& h, const std::string& path) {
  std::vector<unsigned char> bytes = serialize_cipher(ev, h);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), Errc::io, "cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  f.flush();
  require(f.good(), Errc::io, "write failed for " + path);
}

CipherHandle load_cipher(Evaluator& ev, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), Errc::io, "cannot open " + path);
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(f),
                                   std::istreambuf_iterator<char>()};
  require(!f.bad(), Errc::io, "read failed for " + path);
  return deserialize_cipher(ev, bytes.data(), bytes.size());
}

std::string params_to_json(const ParamSet& ps) {
  nlohmann::json j{{"p", ps.p},
                   {"r", ps.r},
                   {"levels", ps.levels},
                   {"slots", ps.slots},
                   {"seed", ps.seed},
                   {"ring_dim", ps.ring_dim},
                   {"sigma", ps.sigma},
                   {"prime_bits", ps.prime_bits},
                   {"relin_window", ps.relin_window}};
  return j.dump(2);
}

ParamSet params_from_json(const std::string& text) {
  ParamSet ps;
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    ps.p = j.at("p").get<u64>();
    ps.r = j.at("r").get<u32>();
    ps.levels = j.at("levels").get<u32>();
    ps.slots = j.value("slots", ps.slots);
    ps.seed = j.value("seed", ps.seed);
    ps.ring_dim = j.value("ring_dim", ps.ring_dim);
    ps.sigma = j.value("sigma", ps.sigma);
    ps.prime_bits = j.value("prime_bits", ps.prime_bits);
    ps.relin_window = j.value("relin_window", ps.relin_window);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::io, std::string("parameter manifest: ") + e.what());
  }
  return ps;
}

}  // namespace spaceswitch
