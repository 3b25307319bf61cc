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

#pragma once

// Keyed primitives used by both SSE schemes.
//
//   prf          HMAC-SHA256(key, index || input), truncated to |key|
//   sym_encrypt  AES-GCM, output nonce(12) || ciphertext || tag(16)
//   det_encrypt  AES-SIV under a key expanded from the k-bit key,
//                output tag(16) || ciphertext
//   keyed_hash   HMAC-SHA256(key, message), truncated to |key|
//   signatures   Ed25519
//
// Key lengths are k/8 bytes with k in {128, 256}.

#include "bcsse/common.hpp"

#include <array>
#include <cstddef>
#include <memory>

struct evp_pkey_st;

namespace bcsse::crypto {

inline constexpr std::size_t kSymOverhead = 12 + 16;
inline constexpr std::size_t kDetOverhead = 16;
inline constexpr std::size_t kSignatureSize = 64;
inline constexpr std::size_t kVerifyKeySize = 32;

/// Throws Error(parameter) unless bits is 128 or 256.
void check_security_param(unsigned bits);
/// Throws Error(parameter) unless key is 16 or 32 bytes.
void check_key(ByteView key);

class EntropySource {
public:
    virtual ~EntropySource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
    /// Upper bound on the entropy this source can supply, in bits.
    virtual unsigned strength_bits() const noexcept = 0;

    Bytes take(std::size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }
};

/// Seeded stream: block_i = HMAC-SHA256(seed, "bcsse/drbg/v1" || be64(i)).
/// Reproducible across runs and across implementations.
class DeterministicEntropy final : public EntropySource {
public:
    explicit DeterministicEntropy(ByteView seed);
    void fill(std::span<std::uint8_t> out) override;
    unsigned strength_bits() const noexcept override;

private:
    Bytes seed_;
    std::uint64_t counter_ = 0;
    std::array<std::uint8_t, 32> block_{};
    std::size_t used_ = 32;
};

/// OS randomness via the OpenSSL DRBG.
class SystemEntropy final : public EntropySource {
public:
    void fill(std::span<std::uint8_t> out) override;
    unsigned strength_bits() const noexcept override { return 256; }
};

/// Owner secrets: k1 encrypts documents, k2 is the index master key.
struct KeyBundle {
    Bytes k1;
    Bytes k2;

    unsigned security_bits() const noexcept { return static_cast<unsigned>(k1.size() * 8); }
    friend bool operator==(const KeyBundle&, const KeyBundle&) = default;
};

KeyBundle gen(unsigned security_bits, EntropySource& entropy);

enum class PrfIndex : std::uint8_t { token = 1, list_key = 2, mac_key = 3 };

Bytes prf(PrfIndex index, ByteView key, ByteView input);

Bytes sym_encrypt(ByteView key, ByteView plaintext, EntropySource& entropy);
/// Throws Error(authentication) on wrong key, truncation or corruption.
Bytes sym_decrypt(ByteView key, ByteView ciphertext);

Bytes det_encrypt(ByteView key, ByteView plaintext);
Bytes det_decrypt(ByteView key, ByteView ciphertext);

Bytes keyed_hash(ByteView key, ByteView message);

Bytes sha256(ByteView data);

struct VerifyKey {
    std::array<std::uint8_t, kVerifyKeySize> bytes{};

    friend auto operator<=>(const VerifyKey&, const VerifyKey&) = default;
};

class SigningKey {
public:
    /// Ed25519 private key from a 32-byte seed.
    explicit SigningKey(ByteView seed);
    static SigningKey generate(EntropySource& entropy);

    const VerifyKey& verify_key() const noexcept { return vk_; }
    Bytes sign(ByteView message) const;

private:
    std::shared_ptr<evp_pkey_st> pkey_;
    VerifyKey vk_;
};

/// Malformed signatures yield false.
bool verify(const VerifyKey& vk, ByteView message, ByteView signature);

}  // namespace bcsse::crypto
