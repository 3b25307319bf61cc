// Copyright 2026 The bcsse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "bcsse/crypto.hpp"
#include "support.hpp"

using namespace bcsse;
using bcsse::testing::hex;
using bcsse::testing::vectors;

TEST_CASE("drbg matches reference stream") {
    for (const auto& v : vectors()["drbg"]) {
        crypto::DeterministicEntropy e(hex(v["seed"]));
        Bytes out = hex(v["out"]);
        // Pull in uneven pieces to cover block boundaries.
        Bytes got = e.take(7);
        append(got, e.take(33));
        append(got, e.take(out.size() - got.size()));
        CHECK(to_hex(got) == to_hex(out));
    }
}

TEST_CASE("gen matches reference keys") {
    for (const auto& v : vectors()["gen"]) {
        crypto::DeterministicEntropy e(hex(v["seed"]));
        auto keys = crypto::gen(v["bits"].get<unsigned>(), e);
        CHECK(to_hex(keys.k1) == v["k1"].get<std::string>());
        CHECK(to_hex(keys.k2) == v["k2"].get<std::string>());
        CHECK(keys.security_bits() == v["bits"].get<unsigned>());
    }
}

TEST_CASE("gen is deterministic per seed and rejects unsupported sizes") {
    crypto::DeterministicEntropy a(to_bytes("seed-S-for-gen-tests-0123456789!")), b(to_bytes("seed-S-for-gen-tests-0123456789!"));
    crypto::DeterministicEntropy c(to_bytes("seed-T-for-gen-tests-0123456789!"));
    auto ka = crypto::gen(256, a);
    auto kb = crypto::gen(256, b);
    auto kc = crypto::gen(256, c);
    CHECK(ka == kb);
    CHECK(ka.k1 != kc.k1);
    CHECK(ka.k2 != kc.k2);
    CHECK(ka.k1 != ka.k2);

    crypto::DeterministicEntropy d(to_bytes("x"));
    CHECK_THROWS_AS(crypto::gen(512, d), Error);
    try {
        crypto::gen(512, d);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::parameter);
    }
}

TEST_CASE("prf matches reference") {
    for (const auto& v : vectors()["prf"]) {
        auto idx = static_cast<crypto::PrfIndex>(v["index"].get<int>());
        CHECK(to_hex(crypto::prf(idx, hex(v["key"]), hex(v["input"]))) == v["out"].get<std::string>());
    }
}

TEST_CASE("prf domain separation and empty input") {
    auto keys = testing::fixed_keys();
    auto w = to_bytes("w");
    CHECK(crypto::prf(crypto::PrfIndex::token, keys.k2, w) == crypto::prf(crypto::PrfIndex::token, keys.k2, w));
    CHECK(crypto::prf(crypto::PrfIndex::token, keys.k2, w) != crypto::prf(crypto::PrfIndex::list_key, keys.k2, w));
    CHECK(crypto::prf(crypto::PrfIndex::token, keys.k2, {}).size() == 32);
    CHECK_THROWS_AS(crypto::prf(crypto::PrfIndex::token, Bytes(20, 1), w), Error);
}

TEST_CASE("keyed hash matches reference") {
    for (const auto& v : vectors()["keyed_hash"])
        CHECK(to_hex(crypto::keyed_hash(hex(v["key"]), hex(v["msg"]))) == v["out"].get<std::string>());
}

TEST_CASE("keyed hash separates every single-byte flip") {
    Bytes key(32, 0x5a), msg(64);
    for (std::size_t i = 0; i < msg.size(); ++i) msg[i] = static_cast<std::uint8_t>(i * 3);
    const Bytes base = crypto::keyed_hash(key, msg);
    CHECK(crypto::keyed_hash(key, msg) == base);
    for (std::size_t i = 0; i < msg.size(); ++i) {
        Bytes m = msg;
        m[i] ^= 0x01;
        CHECK(crypto::keyed_hash(key, m) != base);
    }
    CHECK(crypto::keyed_hash(key, {}).size() == 32);
}

TEST_CASE("deterministic encryption matches reference and round-trips") {
    for (const auto& v : vectors()["det"]) {
        Bytes key = hex(v["key"]), pt = hex(v["pt"]);
        Bytes ct = crypto::det_encrypt(key, pt);
        CHECK(to_hex(ct) == v["ct"].get<std::string>());
        CHECK(crypto::det_decrypt(key, ct) == pt);
    }
}

TEST_CASE("deterministic encryption: determinism, key separation, failure") {
    auto keys = testing::fixed_keys();
    Bytes list(5 * 32);
    for (std::size_t i = 0; i < list.size(); ++i) list[i] = static_cast<std::uint8_t>(i);
    Bytes a = crypto::det_encrypt(keys.k1, list);
    CHECK(a == crypto::det_encrypt(keys.k1, list));
    CHECK(crypto::det_decrypt(keys.k1, a) == list);
    CHECK(a != crypto::det_encrypt(keys.k2, list));
    CHECK_THROWS_AS(crypto::det_decrypt(keys.k2, a), Error);
    Bytes bad = a;
    bad.back() ^= 1;
    CHECK_THROWS_AS(crypto::det_decrypt(keys.k1, bad), Error);
}

TEST_CASE("randomized encryption matches reference with a seeded nonce") {
    for (const auto& v : vectors()["sym"]) {
        crypto::DeterministicEntropy e(hex(v["seed"]));
        Bytes key = hex(v["key"]), pt = hex(v["pt"]);
        Bytes ct = crypto::sym_encrypt(key, pt, e);
        CHECK(to_hex(ct) == v["ct"].get<std::string>());
        CHECK(crypto::sym_decrypt(key, ct) == pt);
    }
}

TEST_CASE("randomized encryption: fresh nonces and exhaustive tamper detection") {
    auto keys = testing::fixed_keys();
    crypto::SystemEntropy sys;
    Bytes kib = sys.take(1024);
    Bytes c1 = crypto::sym_encrypt(keys.k1, kib, sys);
    Bytes c2 = crypto::sym_encrypt(keys.k1, kib, sys);
    CHECK(c1 != c2);
    CHECK(crypto::sym_decrypt(keys.k1, c1) == kib);

    Bytes small = crypto::sym_encrypt(keys.k1, to_bytes("eleven byte"), sys);
    for (std::size_t i = 0; i < small.size(); ++i) {
        Bytes t = small;
        t[i] ^= 0x80;
        CHECK_THROWS_AS(crypto::sym_decrypt(keys.k1, t), Error);
    }
    CHECK_THROWS_AS(crypto::sym_decrypt(keys.k2, small), Error);
    CHECK_THROWS_AS(crypto::sym_decrypt(keys.k1, Bytes(small.begin(), small.end() - 1)), Error);
}

TEST_CASE("ed25519 matches reference and rejects tampering") {
    for (const auto& v : vectors()["ed25519"]) {
        crypto::SigningKey sk(hex(v["seed"]));
        CHECK(to_hex(sk.verify_key().bytes) == v["vk"].get<std::string>());
        Bytes msg = hex(v["msg"]);
        Bytes sig = sk.sign(msg);
        CHECK(to_hex(sig) == v["sig"].get<std::string>());
        CHECK(crypto::verify(sk.verify_key(), msg, sig));
    }
    crypto::SigningKey a(Bytes(32, 1)), b(Bytes(32, 2));
    Bytes msg = to_bytes("pay q");
    Bytes sig = a.sign(msg);
    CHECK_FALSE(crypto::verify(b.verify_key(), msg, sig));
    msg[0] ^= 1;
    CHECK_FALSE(crypto::verify(a.verify_key(), msg, sig));
    CHECK_FALSE(crypto::verify(a.verify_key(), msg, Bytes(10, 0)));
}

TEST_CASE("hex helpers") {
    CHECK(to_hex(from_hex("00ff10")) == "00ff10");
    CHECK_THROWS_AS(from_hex("abc"), Error);
    CHECK_THROWS_AS(from_hex("zz"), Error);
}
