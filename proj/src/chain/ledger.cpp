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

#include "bcsse/chain/ledger.hpp"

#include <algorithm>

namespace bcsse::chain {

namespace {

constexpr std::string_view kMagic = "BCSSELDG";
constexpr std::uint32_t kFormatVersion = 1;

Bytes strip_link(const Bytes& data, std::size_t link, Txid& out_link) {
    if (data.size() < link) throw Error(Errc::corrupt_chain, "split fragment shorter than its link");
    out_link = Txid(Bytes(data.end() - static_cast<std::ptrdiff_t>(link), data.end()));
    return Bytes(data.begin(), data.end() - static_cast<std::ptrdiff_t>(link));
}

}  // namespace

std::string_view reject_name(Reject r) noexcept {
    switch (r) {
        case Reject::none: return "accepted";
        case Reject::locktime_not_reached: return "locktime_not_reached";
        case Reject::script_failed: return "script_failed";
        case Reject::double_spend: return "double_spend";
        case Reject::inflation: return "inflation";
        case Reject::payload_too_large: return "payload_too_large";
        case Reject::missing_input: return "missing_input";
    }
    return "unknown";
}

void ChainConfig::validate() const {
    if (embed_limit == 0) throw Error(Errc::configuration, "embed limit must be positive");
    if (txid_bits % 8 != 0 || txid_bits < 64 || txid_bits > 256)
        throw Error(Errc::configuration, "txid bits must be a multiple of 8 in [64, 256]");
    if (security_bits != 128 && security_bits != 256)
        throw Error(Errc::configuration, "security parameter must be 128 or 256");
    if (tick_per_block == 0) throw Error(Errc::configuration, "clock tick per block must be positive");
}

Ledger::Ledger(ChainConfig config) : config_(config) { config_.validate(); }

Verdict Ledger::validate(const Transaction& tx) const { return check(tx, id_of(tx), true); }

Verdict Ledger::check(const Transaction& tx, const Txid& id, bool enforce_locktime) const {
    if (tx.payload_size() > config_.embed_limit)
        return {Reject::payload_too_large,
                std::to_string(tx.payload_size()) + " > " + std::to_string(config_.embed_limit) + " bytes"};
    if (tx.is_coinbase()) return {Reject::inflation, "coinbase outside the faucet"};

    // (1) the time t is reached
    if (enforce_locktime && tx.locktime > clock_)
        return {Reject::locktime_not_reached,
                "locktime " + std::to_string(tx.locktime) + " > clock " + std::to_string(clock_)};

    // (3) the redeemed outputs exist and are unspent
    if (index_.contains(id)) return {Reject::double_spend, "transaction already mined"};
    std::set<OutPoint> seen;
    std::uint64_t in_total = 0;
    std::vector<const TxOutput*> spent_outputs;
    for (const auto& in : tx.inputs) {
        if (!seen.insert(in.prev).second) return {Reject::double_spend, "input listed twice"};
        if (spent_.contains(in.prev)) return {Reject::double_spend, "output " + in.prev.txid.hex() + " already redeemed"};
        auto it = utxo_.find(in.prev);
        if (it == utxo_.end()) return {Reject::missing_input, "no output " + in.prev.txid.hex()};
        in_total += it->second.value;
        spent_outputs.push_back(&it->second);
    }

    // (2) every output script accepts its input script
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        Verdict v;
        if (!check_script(tx, tx.inputs[i], *spent_outputs[i], v)) return v;
    }

    std::uint64_t out_total = 0;
    for (const auto& o : tx.outputs) {
        if (o.value > UINT64_MAX - out_total) return {Reject::inflation, "output overflow"};
        out_total += o.value;
    }
    if (out_total > in_total)
        return {Reject::inflation, std::to_string(out_total) + " out > " + std::to_string(in_total) + " in"};
    return {};
}

bool Ledger::check_script(const Transaction& tx, const TxInput& in, const TxOutput& spent, Verdict& v) const {
    const Bytes body = serialize_body(tx);
    auto fail = [&](std::string why) {
        v = {Reject::script_failed, std::move(why)};
        return false;
    };
    if (auto* s = std::get_if<SigLock>(&spent.script)) {
        if (in.witness.size() != 1 || !crypto::verify(s->vk, body, in.witness[0])) return fail("bad signature");
        return true;
    }
    if (auto* m = std::get_if<MultisigLock>(&spent.script)) {
        if (in.witness.size() != 2) return fail("2-of-2 needs two signatures");
        if (!crypto::verify(m->a, body, in.witness[0]) || !crypto::verify(m->b, body, in.witness[1]))
            return fail("bad 2-of-2 signature");
        return true;
    }
    const auto& gate = std::get<PayloadGateLock>(spent.script);
    if (in.witness.size() == 2) {
        if (!crypto::verify(gate.refund_a, body, in.witness[0]) || !crypto::verify(gate.refund_b, body, in.witness[1]))
            return fail("bad refund signature");
        return true;
    }
    if (in.witness.size() != 1) return fail("gate needs one or two signatures");
    if (!crypto::verify(gate.claimant, body, in.witness[0])) return fail("bad claimant signature");
    auto it = verifiers_.find(gate.verifier);
    if (it == verifiers_.end()) return fail("unknown verifier '" + gate.verifier + "'");
    bool ok = false;
    try {
        ok = it->second(GateContext{*this, in.prev, spent, tx, gate});
    } catch (const std::exception& e) {
        return fail(std::string("verifier error: ") + e.what());
    }
    if (!ok) return fail("payload rejected by verifier '" + gate.verifier + "'");
    return true;
}

SubmitReceipt Ledger::submit(Transaction tx) {
    Txid id = id_of(tx);
    if (in_mempool(id)) throw TxRejected(Reject::double_spend, "transaction already queued");
    Verdict v = check(tx, id, false);
    if (!v.ok()) throw TxRejected(v.reason, v.detail);
    bool pending = tx.locktime > clock_;
    mempool_.emplace_back(id, std::move(tx));
    return {std::move(id), pending};
}

Txid Ledger::mint(std::vector<TxOutput> outputs) {
    Transaction tx;
    tx.outputs = std::move(outputs);
    tx.nonce = ++mint_counter_;
    if (tx.payload_size() > config_.embed_limit) throw TxRejected(Reject::payload_too_large, "coinbase payload");
    Txid id = id_of(tx);
    pending_mints_.emplace_back(id, std::move(tx));
    return id;
}

Txid Ledger::faucet(const crypto::VerifyKey& to, std::uint64_t amount) {
    return mint({TxOutput{amount, make_sig_script(to), std::nullopt}});
}

void Ledger::apply(const Transaction& tx, const Txid& id) {
    std::uint64_t in_total = 0;
    for (const auto& in : tx.inputs) {
        auto it = utxo_.find(in.prev);
        in_total += it->second.value;
        utxo_.erase(it);
        spent_.emplace(in.prev, id);
    }
    std::uint64_t out_total = 0;
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i) {
        out_total += tx.outputs[i].value;
        utxo_.emplace(OutPoint{id, i}, tx.outputs[i]);
    }
    if (tx.is_coinbase())
        minted_ += out_total;
    else
        fees_ += in_total - out_total;
}

BlockSummary Ledger::mine_block() {
    Block block;
    block.height = blocks_.size();
    block.clock = clock_;
    BlockSummary summary;
    summary.height = block.height;

    auto include = [&](const Txid& id, const Transaction& tx) {
        apply(tx, id);
        index_.emplace(id, std::make_pair(blocks_.size(), block.txs.size()));
        block.txs.push_back(tx);
        block.ids.push_back(id);
        summary.included.push_back(id);
    };

    for (auto& [id, tx] : pending_mints_) include(id, tx);
    pending_mints_.clear();

    std::deque<std::pair<Txid, Transaction>> keep;
    for (auto& entry : mempool_) {
        const auto& [id, tx] = entry;
        if (filter_ && !filter_(id, tx)) {
            keep.push_back(std::move(entry));
            continue;
        }
        Verdict v = check(tx, id, true);
        if (v.ok()) {
            include(id, tx);
        } else if (v.reason == Reject::locktime_not_reached) {
            keep.push_back(std::move(entry));
        } else {
            summary.evicted.emplace_back(id, v.reason);
        }
    }
    mempool_ = std::move(keep);
    summary.still_pending = mempool_.size();

    blocks_.push_back(std::move(block));
    clock_ += config_.tick_per_block;
    summary.clock_after = clock_;
    return summary;
}

void Ledger::mine_until(std::uint64_t target) {
    while (clock_ < target) mine_block();
}

const Transaction* Ledger::find(const Txid& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &blocks_[it->second.first].txs[it->second.second];
}

bool Ledger::in_mempool(const Txid& id) const {
    return std::any_of(mempool_.begin(), mempool_.end(), [&](const auto& e) { return e.first == id; });
}

std::optional<std::uint64_t> Ledger::block_of(const Txid& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second.first;
}

Payload Ledger::read_fragment(const Txid& id) const {
    const Transaction* tx = find(id);
    if (!tx) throw Error(Errc::not_found, "no mined transaction " + id.hex());
    const Payload* p = tx->payload();
    return p ? *p : Payload{};
}

Bytes Ledger::read_payload(const Txid& id) const {
    Payload head = read_fragment(id);
    if (head.kind != PayloadKind::split3) return std::move(head.data);

    const std::size_t link = config_.txid_bytes();
    auto fetch = [&](const Txid& at, PayloadKind want) {
        const Transaction* tx = find(at);
        if (!tx) throw Error(Errc::corrupt_chain, "split fragment " + at.hex() + " missing from the ledger");
        const Payload* p = tx->payload();
        if (!p || p->kind != want) throw Error(Errc::corrupt_chain, "split fragment " + at.hex() + " has the wrong kind");
        return p->data;
    };
    Txid to_second;
    Bytes token = strip_link(head.data, link, to_second);
    Txid to_first;
    Bytes middle = strip_link(fetch(to_second, PayloadKind::split2), link, to_first);
    Bytes first = fetch(to_first, PayloadKind::split1);
    return concat({token, middle, first});
}

std::optional<Txid> Ledger::spender_of(const OutPoint& op) const {
    auto it = spent_.find(op);
    if (it == spent_.end()) return std::nullopt;
    return it->second;
}

bool Ledger::mempool_spends(const OutPoint& op) const {
    for (const auto& [id, tx] : mempool_)
        for (const auto& in : tx.inputs)
            if (in.prev == op) return true;
    return false;
}

std::uint64_t Ledger::balance(const crypto::VerifyKey& vk) const {
    std::uint64_t total = 0;
    for (const auto& [op, out] : utxo_)
        if (auto* s = std::get_if<SigLock>(&out.script); s && s->vk == vk) total += out.value;
    return total;
}

std::uint64_t Ledger::utxo_total() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [op, out] : utxo_) total += out.value;
    return total;
}

void Ledger::register_verifier(std::string id, PayloadVerifier verifier) { verifiers_[std::move(id)] = std::move(verifier); }

void Ledger::set_inclusion_filter(std::function<bool(const Txid&, const Transaction&)> filter) {
    filter_ = std::move(filter);
}

Bytes Ledger::dump() const {
    serial::Writer w;
    w.raw(to_bytes(kMagic));
    w.u32(kFormatVersion);
    w.u64(config_.embed_limit);
    w.u32(config_.txid_bits);
    w.u32(config_.security_bits);
    w.u64(config_.tick_per_block);
    w.u64(clock_);
    w.u64(mint_counter_);
    w.u32(static_cast<std::uint32_t>(blocks_.size()));
    for (const auto& b : blocks_) {
        serial::Writer bw;
        bw.u64(b.height);
        bw.u64(b.clock);
        bw.u32(static_cast<std::uint32_t>(b.txs.size()));
        for (const auto& tx : b.txs) bw.blob(serialize(tx));
        w.blob(bw.bytes());
    }
    w.u32(static_cast<std::uint32_t>(mempool_.size()));
    for (const auto& [id, tx] : mempool_) w.blob(serialize(tx));
    w.u32(static_cast<std::uint32_t>(pending_mints_.size()));
    for (const auto& [id, tx] : pending_mints_) w.blob(serialize(tx));
    return std::move(w).take();
}

Ledger Ledger::load(ByteView image) {
    serial::Reader r(image);
    if (r.raw(kMagic.size()) != to_bytes(kMagic)) throw Error(Errc::integrity, "not a ledger image");
    if (r.u32() != kFormatVersion) throw Error(Errc::integrity, "unsupported ledger format version");
    ChainConfig cfg;
    cfg.embed_limit = r.u64();
    cfg.txid_bits = r.u32();
    cfg.security_bits = r.u32();
    cfg.tick_per_block = r.u64();
    Ledger ledger(cfg);
    ledger.clock_ = r.u64();
    ledger.mint_counter_ = r.u64();

    auto read_tx = [](ByteView b) {
        serial::Reader tr(b);
        Transaction tx = deserialize_transaction(tr);
        tr.expect_done();
        return tx;
    };

    const auto n_blocks = r.u32();
    for (std::uint32_t bi = 0; bi < n_blocks; ++bi) {
        Bytes raw = r.blob();
        serial::Reader br(raw);
        Block block;
        block.height = br.u64();
        block.clock = br.u64();
        if (block.height != bi) throw Error(Errc::integrity, "block height out of sequence");
        const auto n_tx = br.u32();
        for (std::uint32_t ti = 0; ti < n_tx; ++ti) {
            Transaction tx = read_tx(br.blob());
            Txid id = ledger.id_of(tx);
            for (const auto& in : tx.inputs)
                if (!ledger.utxo_.contains(in.prev)) throw Error(Errc::integrity, "block spends an unknown output");
            ledger.apply(tx, id);
            ledger.index_.emplace(id, std::make_pair(static_cast<std::size_t>(bi), block.txs.size()));
            block.txs.push_back(std::move(tx));
            block.ids.push_back(std::move(id));
        }
        br.expect_done();
        ledger.blocks_.push_back(std::move(block));
    }
    const auto n_pool = r.u32();
    for (std::uint32_t i = 0; i < n_pool; ++i) {
        Transaction tx = read_tx(r.blob());
        Txid id = ledger.id_of(tx);
        ledger.mempool_.emplace_back(std::move(id), std::move(tx));
    }
    const auto n_mints = r.u32();
    for (std::uint32_t i = 0; i < n_mints; ++i) {
        Transaction tx = read_tx(r.blob());
        Txid id = ledger.id_of(tx);
        ledger.pending_mints_.emplace_back(std::move(id), std::move(tx));
    }
    r.expect_done();
    return ledger;
}

}  // namespace bcsse::chain
