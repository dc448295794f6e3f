// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "spaceswitch/bgv.hpp"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/serialize.hpp"

using namespace spaceswitch;

namespace {

ParamSet make_ps(u64 p, u32 r, u32 levels, std::size_t slots = 4, u64 seed = 7) {
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = levels;
  ps.slots = slots;
  ps.seed = seed;
  return ps;
}

template <typename F>
void expect_io(F f) {
  try {
    f();
    CHECK_MESSAGE(false, "expected an Errc::io failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
}

}  // namespace

TEST_CASE("cleartext handles survive a byte round trip with level and tag intact") {
  ClearEval ev(make_ps(5, 3, 8, 6));
  CipherHandle a = ev.encode_vector({3, 117, 0, 124, 60, 9});
  CipherHandle b = ev.mul(a, a);          // burns one level
  CipherHandle c = ev.change_mod_to_p(b); // tag drops to 1

  for (const CipherHandle* h : {&a, &b, &c}) {
    std::vector<unsigned char> img = serialize_cipher(ev, *h);
    CipherHandle back = deserialize_cipher(ev, img);
    CHECK(back.level == h->level);
    CHECK(back.tag_exp == h->tag_exp);
    CHECK(ev.decode(back) == ev.decode(*h));
  }
}

TEST_CASE("lattice ciphertexts round trip into a context rebuilt from the same seed") {
  ParamSet ps = make_ps(5, 3, 3, 1, 11);
  BgvEval ev(ps);
  CipherHandle x = ev.encode_vector({13});
  CipherHandle y = ev.encode_vector({17});
  CipherHandle prod = ev.mul(x, y); // level 3 -> 2
  std::vector<unsigned char> img = serialize_cipher(ev, prod);

  BgvEval fresh(ps);
  CipherHandle back = deserialize_cipher(fresh, img);
  CHECK(back.level == 2);
  CHECK(back.tag_exp == 3);
  CHECK(fresh.decode(back) == std::vector<u64>{13 * 17 % 125});
  CHECK(fresh.noise_budget_bits(back) > 0.0);
}

TEST_CASE("file save and load round trip on both backends") {
  namespace fs = std::filesystem;
  std::string path = (fs::temp_directory_path() / "ssw_serialize_test.bin").string();

  ClearEval cev(make_ps(7, 2, 5, 3));
  CipherHandle ch = cev.encode_vector({1, 45, 30});
  save_cipher(cev, ch, path);
  CHECK(cev.decode(load_cipher(cev, path)) == std::vector<u64>{1, 45, 30});

  ParamSet bps = make_ps(7, 2, 2, 1, 5);
  BgvEval bev(bps);
  save_cipher(bev, bev.encode_vector({33}), path);
  CHECK(bev.decode(load_cipher(bev, path)) == std::vector<u64>{33});

  std::remove(path.c_str());
  expect_io([&] { load_cipher(cev, path); }); // gone now
}

TEST_CASE("malformed images are rejected with an i/o error") {
  ClearEval ev(make_ps(5, 3, 8, 2));
  std::vector<unsigned char> good = serialize_cipher(ev, ev.encode_vector({100, 3}));

  SUBCASE("bad magic") {
    auto img = good;
    img[0] = 'X';
    expect_io([&] { deserialize_cipher(ev, img); });
  }
  SUBCASE("future version") {
    auto img = good;
    img[4] = 9;
    expect_io([&] { deserialize_cipher(ev, img); });
  }
  SUBCASE("truncated payload") {
    auto img = good;
    img.resize(img.size() - 3);
    expect_io([&] { deserialize_cipher(ev, img); });
  }
  SUBCASE("trailing bytes") {
    auto img = good;
    img.push_back(0);
    expect_io([&] { deserialize_cipher(ev, img); });
  }
  SUBCASE("slot value beyond the tag modulus") {
    auto img = good;
    img[img.size() - 1] = 0xff; // high byte of the last slot
    expect_io([&] { deserialize_cipher(ev, img); });
  }
  SUBCASE("empty input") {
    expect_io([&] { deserialize_cipher(ev, nullptr, 0); });
  }
}

TEST_CASE("images refuse to load into a mismatched context") {
  ClearEval ev53(make_ps(5, 3, 8, 2));
  std::vector<unsigned char> img = serialize_cipher(ev53, ev53.encode_vector({1, 2}));

  ClearEval ev73(make_ps(7, 3, 8, 2));
  expect_io([&] { deserialize_cipher(ev73, img); }); // wrong p

  BgvEval bev(make_ps(5, 3, 2, 1));
  expect_io([&] { deserialize_cipher(bev, img); }); // wrong backend

  std::vector<unsigned char> bimg = serialize_cipher(bev, bev.encode_vector({7}));
  expect_io([&] { deserialize_cipher(ev53, bimg); }); // wrong backend, other way

  // Same (p, r) but a different modulus chain: the coefficient width differs.
  ParamSet wide = make_ps(5, 3, 2, 1);
  wide.prime_bits = 50;
  BgvEval bwide(wide);
  expect_io([&] { deserialize_cipher(bwide, bimg); });
}

TEST_CASE("parameter manifests round trip through json") {
  ParamSet ps = make_ps(23, 2, 21, 1, 99);
  ps.ring_dim = 128;
  ps.prime_bits = 50;
  ps.relin_window = 25;
  ParamSet back = params_from_json(params_to_json(ps));
  CHECK(back.p == ps.p);
  CHECK(back.r == ps.r);
  CHECK(back.levels == ps.levels);
  CHECK(back.slots == ps.slots);
  CHECK(back.seed == ps.seed);
  CHECK(back.ring_dim == ps.ring_dim);
  CHECK(back.sigma == ps.sigma);
  CHECK(back.prime_bits == ps.prime_bits);
  CHECK(back.relin_window == ps.relin_window);

  // Lattice knobs are optional and default; the modulus shape is not.
  ParamSet sparse = params_from_json(R"({"p": 7, "r": 4, "levels": 10})");
  CHECK(sparse.p == 7);
  CHECK(sparse.ring_dim == ParamSet{}.ring_dim);

  expect_io([] { params_from_json("{not json"); });
  expect_io([] { params_from_json(R"({"p": 5, "r": 2})"); }); // levels missing
}
