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

#include "bcsse/chain/transaction.hpp"

#include <algorithm>

namespace bcsse::chain {

namespace {

constexpr std::uint32_t kTxVersion = 1;

enum ScriptTag : std::uint8_t { kSig = 1, kMultisig = 2, kGate = 3 };

void write_vk(serial::Writer& w, const crypto::VerifyKey& vk) { w.raw(vk.bytes); }

crypto::VerifyKey read_vk(serial::Reader& r) {
    crypto::VerifyKey vk;
    Bytes b = r.raw(vk.bytes.size());
    std::copy(b.begin(), b.end(), vk.bytes.begin());
    return vk;
}

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void write_body(serial::Writer& w, const Transaction& tx) {
    w.u32(kTxVersion);
    w.u32(static_cast<std::uint32_t>(tx.inputs.size()));
    for (const auto& in : tx.inputs) {
        w.blob(in.prev.txid.bytes());
        w.u32(in.prev.index);
    }
    w.u32(static_cast<std::uint32_t>(tx.outputs.size()));
    for (const auto& out : tx.outputs) {
        w.u64(out.value);
        write_script(w, out.script);
        if (out.payload) {
            w.u8(1);
            w.u8(static_cast<std::uint8_t>(out.payload->kind));
            w.blob(out.payload->data);
        } else {
            w.u8(0);
        }
    }
    w.u64(tx.locktime);
    w.u64(tx.nonce);
}

}  // namespace

bool Txid::is_zero() const noexcept {
    return std::all_of(bytes_.begin(), bytes_.end(), [](std::uint8_t b) { return b == 0; });
}

Script make_sig_script(const crypto::VerifyKey& vk) { return SigLock{vk}; }

Script make_multisig_2of2(const crypto::VerifyKey& a, const crypto::VerifyKey& b) { return MultisigLock{a, b}; }

Script make_payload_gate(std::string verifier_id, Bytes argument, const crypto::VerifyKey& claimant,
                         const crypto::VerifyKey& refund_a, const crypto::VerifyKey& refund_b) {
    return PayloadGateLock{std::move(verifier_id), std::move(argument), claimant, refund_a, refund_b};
}

std::size_t Transaction::payload_size() const noexcept {
    std::size_t n = 0;
    for (const auto& o : outputs)
        if (o.payload) n += o.payload->data.size();
    return n;
}

const Payload* Transaction::payload() const noexcept {
    for (const auto& o : outputs)
        if (o.payload) return &*o.payload;
    return nullptr;
}

void write_script(serial::Writer& w, const Script& s) {
    std::visit(overloaded{
                   [&](const SigLock& l) {
                       w.u8(kSig);
                       write_vk(w, l.vk);
                   },
                   [&](const MultisigLock& l) {
                       w.u8(kMultisig);
                       write_vk(w, l.a);
                       write_vk(w, l.b);
                   },
                   [&](const PayloadGateLock& l) {
                       w.u8(kGate);
                       w.str(l.verifier);
                       w.blob(l.argument);
                       write_vk(w, l.claimant);
                       write_vk(w, l.refund_a);
                       write_vk(w, l.refund_b);
                   },
               },
               s);
}

Script read_script(serial::Reader& r) {
    switch (r.u8()) {
        case kSig: return SigLock{read_vk(r)};
        case kMultisig: {
            auto a = read_vk(r);
            auto b = read_vk(r);
            return MultisigLock{a, b};
        }
        case kGate: {
            PayloadGateLock g;
            g.verifier = r.str();
            g.argument = r.blob();
            g.claimant = read_vk(r);
            g.refund_a = read_vk(r);
            g.refund_b = read_vk(r);
            return g;
        }
        default: throw Error(Errc::integrity, "unknown script tag");
    }
}

Bytes serialize_body(const Transaction& tx) {
    serial::Writer w;
    write_body(w, tx);
    return std::move(w).take();
}

Bytes serialize(const Transaction& tx) {
    serial::Writer w;
    write_body(w, tx);
    for (const auto& in : tx.inputs) {
        w.u32(static_cast<std::uint32_t>(in.witness.size()));
        for (const auto& sig : in.witness) w.blob(sig);
    }
    return std::move(w).take();
}

Transaction deserialize_transaction(serial::Reader& r) {
    Transaction tx;
    if (r.u32() != kTxVersion) throw Error(Errc::integrity, "unsupported transaction version");
    const auto n_in = r.u32();
    for (std::uint32_t i = 0; i < n_in; ++i) {
        TxInput in;
        in.prev.txid = Txid(r.blob());
        in.prev.index = r.u32();
        tx.inputs.push_back(std::move(in));
    }
    const auto n_out = r.u32();
    for (std::uint32_t i = 0; i < n_out; ++i) {
        TxOutput out;
        out.value = r.u64();
        out.script = read_script(r);
        if (r.u8() != 0) {
            Payload p;
            auto kind = r.u8();
            if (kind > static_cast<std::uint8_t>(PayloadKind::split3)) throw Error(Errc::integrity, "unknown payload kind");
            p.kind = static_cast<PayloadKind>(kind);
            p.data = r.blob();
            out.payload = std::move(p);
        }
        tx.outputs.push_back(std::move(out));
    }
    tx.locktime = r.u64();
    tx.nonce = r.u64();
    for (auto& in : tx.inputs) {
        const auto n_sig = r.u32();
        for (std::uint32_t i = 0; i < n_sig; ++i) in.witness.push_back(r.blob());
    }
    return tx;
}

Txid txid(const Transaction& tx, std::size_t id_bytes) {
    if (id_bytes == 0 || id_bytes > 32) throw Error(Errc::parameter, "txid length must be 1..32 bytes");
    Bytes digest = crypto::sha256(serialize_body(tx));
    digest.resize(id_bytes);
    return Txid(std::move(digest));
}

Bytes sign_body(const Transaction& tx, const crypto::SigningKey& key) { return key.sign(serialize_body(tx)); }

}  // namespace bcsse::chain
