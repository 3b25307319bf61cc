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

#include "bcsse/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cstring>

namespace bcsse::crypto {

namespace {

constexpr std::size_t kGcmNonce = 12;
constexpr std::size_t kTag = 16;
constexpr std::string_view kDrbgLabel = "bcsse/drbg/v1";
constexpr std::string_view kSivLabel = "bcsse/siv/v1";
constexpr std::string_view kSigLabel = "bcsse/sig/v1";

struct CipherCtx {
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    ~CipherCtx() { EVP_CIPHER_CTX_free(ctx); }
    CipherCtx() {
        if (!ctx) throw std::bad_alloc();
    }
    CipherCtx(const CipherCtx&) = delete;
    CipherCtx& operator=(const CipherCtx&) = delete;
};

struct FetchedCipher {
    EVP_CIPHER* cipher;
    explicit FetchedCipher(const char* name) : cipher(EVP_CIPHER_fetch(nullptr, name, nullptr)) {
        if (!cipher) throw Error(Errc::configuration, std::string("OpenSSL lacks cipher ") + name);
    }
    ~FetchedCipher() { EVP_CIPHER_free(cipher); }
    FetchedCipher(const FetchedCipher&) = delete;
    FetchedCipher& operator=(const FetchedCipher&) = delete;
};

std::array<std::uint8_t, 32> hmac_sha256(ByteView key, ByteView msg) {
    std::array<std::uint8_t, 32> out{};
    unsigned len = 0;
    // HMAC() rejects a null data pointer even for zero length.
    static const std::uint8_t empty = 0;
    const std::uint8_t* data = msg.empty() ? &empty : msg.data();
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data, msg.size(), out.data(), &len))
        throw Error(Errc::configuration, "HMAC-SHA256 failed");
    return out;
}

ByteView label_view(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

Bytes siv_key(ByteView key) {
    Bytes out;
    for (std::uint8_t i = 1; out.size() < 2 * key.size(); ++i) {
        Bytes msg = to_bytes(kSivLabel);
        msg.push_back(i);
        auto block = hmac_sha256(key, msg);
        append(out, block);
    }
    out.resize(2 * key.size());
    return out;
}

const char* siv_name(std::size_t key_bytes) { return key_bytes == 16 ? "AES-128-SIV" : "AES-256-SIV"; }
const EVP_CIPHER* gcm_cipher(std::size_t key_bytes) {
    return key_bytes == 16 ? EVP_aes_128_gcm() : EVP_aes_256_gcm();
}

Bytes sighash(ByteView message) { return concat({label_view(kSigLabel), message}); }

}  // namespace

void check_security_param(unsigned bits) {
    if (bits != 128 && bits != 256)
        throw Error(Errc::parameter, "unsupported security parameter " + std::to_string(bits) + " (expected 128 or 256)");
}

void check_key(ByteView key) {
    if (key.size() != 16 && key.size() != 32)
        throw Error(Errc::parameter, "key must be 16 or 32 bytes, got " + std::to_string(key.size()));
}

DeterministicEntropy::DeterministicEntropy(ByteView seed) : seed_(seed.begin(), seed.end()) {
    if (seed_.empty()) throw Error(Errc::parameter, "entropy seed must not be empty");
}

void DeterministicEntropy::fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
        if (used_ == block_.size()) {
            Bytes msg = to_bytes(kDrbgLabel);
            for (int s = 56; s >= 0; s -= 8) msg.push_back(static_cast<std::uint8_t>(counter_ >> s));
            ++counter_;
            block_ = hmac_sha256(seed_, msg);
            used_ = 0;
        }
        b = block_[used_++];
    }
}

unsigned DeterministicEntropy::strength_bits() const noexcept {
    return static_cast<unsigned>(std::min<std::size_t>(seed_.size() * 8, 256));
}

void SystemEntropy::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        throw Error(Errc::configuration, "system RNG failure");
}

KeyBundle gen(unsigned security_bits, EntropySource& entropy) {
    check_security_param(security_bits);
    if (entropy.strength_bits() < security_bits)
        throw Error(Errc::parameter, "entropy source weaker than the security parameter");
    KeyBundle keys;
    keys.k1 = entropy.take(security_bits / 8);
    keys.k2 = entropy.take(security_bits / 8);
    return keys;
}

Bytes prf(PrfIndex index, ByteView key, ByteView input) {
    check_key(key);
    Bytes msg;
    msg.reserve(input.size() + 1);
    msg.push_back(static_cast<std::uint8_t>(index));
    append(msg, input);
    auto full = hmac_sha256(key, msg);
    return Bytes(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(key.size()));
}

Bytes sym_encrypt(ByteView key, ByteView plaintext, EntropySource& entropy) {
    check_key(key);
    Bytes out(kGcmNonce + plaintext.size() + kTag);
    entropy.fill(std::span(out.data(), kGcmNonce));
    CipherCtx c;
    int len = 0;
    if (EVP_EncryptInit_ex(c.ctx, gcm_cipher(key.size()), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(kGcmNonce), nullptr) != 1 ||
        EVP_EncryptInit_ex(c.ctx, nullptr, nullptr, key.data(), out.data()) != 1)
        throw Error(Errc::configuration, "AES-GCM init failed");
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(c.ctx, out.data() + kGcmNonce, &len, plaintext.data(), static_cast<int>(plaintext.size())) != 1)
        throw Error(Errc::configuration, "AES-GCM encrypt failed");
    int fin = 0;
    if (EVP_EncryptFinal_ex(c.ctx, out.data() + kGcmNonce + len, &fin) != 1 ||
        EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_GET_TAG, static_cast<int>(kTag), out.data() + kGcmNonce + plaintext.size()) != 1)
        throw Error(Errc::configuration, "AES-GCM finalize failed");
    return out;
}

Bytes sym_decrypt(ByteView key, ByteView ciphertext) {
    check_key(key);
    if (ciphertext.size() < kSymOverhead) throw Error(Errc::authentication, "ciphertext truncated");
    const std::size_t n = ciphertext.size() - kSymOverhead;
    Bytes out(n);
    Bytes tag(ciphertext.end() - kTag, ciphertext.end());
    CipherCtx c;
    int len = 0;
    if (EVP_DecryptInit_ex(c.ctx, gcm_cipher(key.size()), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(kGcmNonce), nullptr) != 1 ||
        EVP_DecryptInit_ex(c.ctx, nullptr, nullptr, key.data(), ciphertext.data()) != 1)
        throw Error(Errc::configuration, "AES-GCM init failed");
    if (n > 0 && EVP_DecryptUpdate(c.ctx, out.data(), &len, ciphertext.data() + kGcmNonce, static_cast<int>(n)) != 1)
        throw Error(Errc::authentication, "AES-GCM decrypt failed");
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_TAG, static_cast<int>(kTag), tag.data()) != 1)
        throw Error(Errc::configuration, "AES-GCM set tag failed");
    int fin = 0;
    if (EVP_DecryptFinal_ex(c.ctx, out.data() + len, &fin) != 1)
        throw Error(Errc::authentication, "authenticated decryption failed");
    return out;
}

namespace {

std::array<std::uint8_t, 16> cmac(ByteView key, ByteView msg) {
    EVP_MAC* mac = EVP_MAC_fetch(nullptr, "CMAC", nullptr);
    if (!mac) throw Error(Errc::configuration, "OpenSSL lacks CMAC");
    EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
    EVP_MAC_free(mac);
    if (!ctx) throw std::bad_alloc();
    char name[16];
    std::strcpy(name, key.size() == 16 ? "AES-128-CBC" : "AES-256-CBC");
    OSSL_PARAM params[] = {OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CIPHER, name, 0), OSSL_PARAM_construct_end()};
    std::array<std::uint8_t, 16> out{};
    std::size_t len = 0;
    const bool ok = EVP_MAC_init(ctx, key.data(), key.size(), params) == 1 &&
                    EVP_MAC_update(ctx, msg.data(), msg.size()) == 1 &&
                    EVP_MAC_final(ctx, out.data(), &len, out.size()) == 1 && len == out.size();
    EVP_MAC_CTX_free(ctx);
    if (!ok) throw Error(Errc::configuration, "CMAC failed");
    return out;
}

// S2V over the empty string with no associated data: the synthetic IV is
// CMAC(K, dbl(CMAC(K, 0^128)) xor 10^127).
Bytes siv_empty_tag(ByteView siv_key) {
    const ByteView mac_key = siv_key.first(siv_key.size() / 2);
    std::array<std::uint8_t, 16> zero{};
    auto d = cmac(mac_key, zero);
    std::array<std::uint8_t, 16> t{};
    for (std::size_t i = 0; i < 16; ++i) t[i] = static_cast<std::uint8_t>((d[i] << 1) | (i + 1 < 16 ? d[i + 1] >> 7 : 0));
    if (d[0] & 0x80) t[15] ^= 0x87;
    t[0] ^= 0x80;
    auto v = cmac(mac_key, t);
    return Bytes(v.begin(), v.end());
}

}  // namespace

Bytes det_encrypt(ByteView key, ByteView plaintext) {
    check_key(key);
    Bytes k = siv_key(key);
    if (plaintext.empty()) return siv_empty_tag(k);
    FetchedCipher cipher(siv_name(key.size()));
    CipherCtx c;
    Bytes out(kTag + plaintext.size());
    int len = 0;
    if (EVP_EncryptInit_ex2(c.ctx, cipher.cipher, k.data(), nullptr, nullptr) != 1)
        throw Error(Errc::configuration, "AES-SIV init failed");
    if (EVP_EncryptUpdate(c.ctx, out.data() + kTag, &len, plaintext.data(), static_cast<int>(plaintext.size())) != 1)
        throw Error(Errc::configuration, "AES-SIV encrypt failed");
    int fin = 0;
    if (EVP_EncryptFinal_ex(c.ctx, out.data() + kTag + len, &fin) != 1 ||
        EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_AEAD_GET_TAG, static_cast<int>(kTag), out.data()) != 1)
        throw Error(Errc::configuration, "AES-SIV finalize failed");
    return out;
}

Bytes det_decrypt(ByteView key, ByteView ciphertext) {
    check_key(key);
    if (ciphertext.size() < kDetOverhead) throw Error(Errc::authentication, "ciphertext truncated");
    Bytes k = siv_key(key);
    const std::size_t n = ciphertext.size() - kTag;
    if (n == 0) {
        if (CRYPTO_memcmp(siv_empty_tag(k).data(), ciphertext.data(), kTag) != 0)
            throw Error(Errc::authentication, "authenticated decryption failed");
        return {};
    }
    FetchedCipher cipher(siv_name(key.size()));
    CipherCtx c;
    Bytes out(n);
    Bytes tag(ciphertext.begin(), ciphertext.begin() + kTag);
    int len = 0;
    if (EVP_DecryptInit_ex2(c.ctx, cipher.cipher, k.data(), nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_AEAD_SET_TAG, static_cast<int>(kTag), tag.data()) != 1)
        throw Error(Errc::configuration, "AES-SIV init failed");
    if (EVP_DecryptUpdate(c.ctx, out.data(), &len, ciphertext.data() + kTag, static_cast<int>(n)) != 1)
        throw Error(Errc::authentication, "authenticated decryption failed");
    int fin = 0;
    if (EVP_DecryptFinal_ex(c.ctx, out.data() + len, &fin) != 1)
        throw Error(Errc::authentication, "authenticated decryption failed");
    return out;
}

Bytes keyed_hash(ByteView key, ByteView message) {
    check_key(key);
    auto full = hmac_sha256(key, message);
    return Bytes(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(key.size()));
}

Bytes sha256(ByteView data) {
    Bytes out(SHA256_DIGEST_LENGTH);
    SHA256(data.data(), data.size(), out.data());
    return out;
}

SigningKey::SigningKey(ByteView seed) {
    if (seed.size() != 32) throw Error(Errc::parameter, "signing seed must be 32 bytes");
    EVP_PKEY* raw = EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size());
    if (!raw) throw Error(Errc::configuration, "Ed25519 key construction failed");
    pkey_ = std::shared_ptr<EVP_PKEY>(raw, EVP_PKEY_free);
    std::size_t len = vk_.bytes.size();
    if (EVP_PKEY_get_raw_public_key(raw, vk_.bytes.data(), &len) != 1 || len != vk_.bytes.size())
        throw Error(Errc::configuration, "Ed25519 public key extraction failed");
}

SigningKey SigningKey::generate(EntropySource& entropy) { return SigningKey(entropy.take(32)); }

Bytes SigningKey::sign(ByteView message) const {
    Bytes msg = sighash(message);
    Bytes sig(kSignatureSize);
    std::size_t len = sig.size();
    EVP_MD_CTX* md = EVP_MD_CTX_new();
    if (!md) throw std::bad_alloc();
    int ok = EVP_DigestSignInit(md, nullptr, nullptr, nullptr, pkey_.get()) == 1 &&
             EVP_DigestSign(md, sig.data(), &len, msg.data(), msg.size()) == 1;
    EVP_MD_CTX_free(md);
    if (!ok || len != kSignatureSize) throw Error(Errc::configuration, "Ed25519 signing failed");
    return sig;
}

bool verify(const VerifyKey& vk, ByteView message, ByteView signature) {
    if (signature.size() != kSignatureSize) return false;
    EVP_PKEY* pk = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, vk.bytes.data(), vk.bytes.size());
    if (!pk) return false;
    Bytes msg = sighash(message);
    EVP_MD_CTX* md = EVP_MD_CTX_new();
    bool ok = md && EVP_DigestVerifyInit(md, nullptr, nullptr, nullptr, pk) == 1 &&
              EVP_DigestVerify(md, signature.data(), signature.size(), msg.data(), msg.size()) == 1;
    EVP_MD_CTX_free(md);
    EVP_PKEY_free(pk);
    return ok;
}

}  // namespace bcsse::crypto
