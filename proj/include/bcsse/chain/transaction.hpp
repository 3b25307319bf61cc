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

#include "bcsse/common.hpp"
#include "bcsse/crypto.hpp"
#include "bcsse/serial.hpp"

#include <optional>
#include <string>
#include <variant>

namespace bcsse::chain {

/// Transaction identifier: the leading p/8 bytes of SHA-256 over the
/// canonical body encoding.
class Txid {
public:
    Txid() = default;
    explicit Txid(Bytes bytes) : bytes_(std::move(bytes)) {}

    static Txid zero(std::size_t len) { return Txid(Bytes(len, 0)); }
    static Txid from_hex(std::string_view hex) { return Txid(bcsse::from_hex(hex)); }

    const Bytes& bytes() const noexcept { return bytes_; }
    std::size_t size() const noexcept { return bytes_.size(); }
    bool is_zero() const noexcept;
    std::string hex() const { return to_hex(bytes_); }

    friend auto operator<=>(const Txid&, const Txid&) = default;

private:
    Bytes bytes_;
};

struct OutPoint {
    Txid txid;
    std::uint32_t index = 0;

    friend auto operator<=>(const OutPoint&, const OutPoint&) = default;
};

/// Pay to a single key; spent with one signature.
struct SigLock {
    crypto::VerifyKey vk;
    friend bool operator==(const SigLock&, const SigLock&) = default;
};

/// Spent only with signatures from both keys, in (a, b) order.
struct MultisigLock {
    crypto::VerifyKey a;
    crypto::VerifyKey b;
    friend bool operator==(const MultisigLock&, const MultisigLock&) = default;
};

/// Two spend paths:
///   claim  - one signature by `claimant` and the spending transaction's
///            payload accepted by the verifier registered under `verifier`;
///   refund - signatures by both `refund_a` and `refund_b` (the Fuse path).
struct PayloadGateLock {
    std::string verifier;
    Bytes argument;
    crypto::VerifyKey claimant;
    crypto::VerifyKey refund_a;
    crypto::VerifyKey refund_b;
    friend bool operator==(const PayloadGateLock&, const PayloadGateLock&) = default;
};

using Script = std::variant<SigLock, MultisigLock, PayloadGateLock>;

Script make_sig_script(const crypto::VerifyKey& vk);
Script make_multisig_2of2(const crypto::VerifyKey& a, const crypto::VerifyKey& b);
Script make_payload_gate(std::string verifier_id, Bytes argument, const crypto::VerifyKey& claimant,
                         const crypto::VerifyKey& refund_a, const crypto::VerifyKey& refund_b);

/// How an embedded payload relates to other transactions.
enum class PayloadKind : std::uint8_t {
    raw = 0,     // self-contained bytes
    chunk = 1,   // document chunk: data || link to previous chunk (0^p for the first)
    split1 = 2,  // first split fragment: data || previous-record link
    split2 = 3,  // data || txid of the split1 fragment
    split3 = 4,  // data || txid of the split2 fragment; the readable head
};

struct Payload {
    PayloadKind kind = PayloadKind::raw;
    Bytes data;
    friend bool operator==(const Payload&, const Payload&) = default;
};

struct TxInput {
    OutPoint prev;
    /// Input script: the signatures satisfying the spent output's script.
    std::vector<Bytes> witness;
};

struct TxOutput {
    std::uint64_t value = 0;
    Script script;
    std::optional<Payload> payload;
};

struct Transaction {
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    /// Earliest logical clock at which the transaction is valid; 0 = none.
    std::uint64_t locktime = 0;
    /// Distinguishes otherwise identical coinbase transactions.
    std::uint64_t nonce = 0;

    bool is_coinbase() const noexcept { return inputs.empty(); }
    /// Total embedded payload bytes across outputs.
    std::size_t payload_size() const noexcept;
    /// First payload-bearing output, if any.
    const Payload* payload() const noexcept;
};

/// Canonical body [T_x]: everything except input witnesses. Signatures and
/// txids both commit to exactly these bytes.
Bytes serialize_body(const Transaction& tx);
Bytes serialize(const Transaction& tx);
Transaction deserialize_transaction(serial::Reader& in);

Txid txid(const Transaction& tx, std::size_t id_bytes = 32);

/// Signature of `key` over the body of `tx`.
Bytes sign_body(const Transaction& tx, const crypto::SigningKey& key);

void write_script(serial::Writer& w, const Script& s);
Script read_script(serial::Reader& r);

}  // namespace bcsse::chain
