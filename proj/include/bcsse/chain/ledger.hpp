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

#include "bcsse/chain/transaction.hpp"

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>

namespace bcsse::chain {

struct ChainConfig {
    /// Maximum embedded payload bytes per transaction (iota).
    std::size_t embed_limit = 80;
    /// Transaction identifier length p, in bits.
    unsigned txid_bits = 256;
    /// Security parameter k carried alongside the chain so that every
    /// component of a deployment agrees on token sizes.
    unsigned security_bits = 256;
    std::uint64_t tick_per_block = 1;

    std::size_t txid_bytes() const noexcept { return txid_bits / 8; }
    /// Throws Error(configuration) on an unusable combination.
    void validate() const;

    friend bool operator==(const ChainConfig&, const ChainConfig&) = default;
};

enum class Reject : std::uint8_t {
    none = 0,
    locktime_not_reached,
    script_failed,
    double_spend,
    inflation,
    payload_too_large,
    missing_input,
};

std::string_view reject_name(Reject r) noexcept;

struct Verdict {
    Reject reason = Reject::none;
    std::string detail;

    bool ok() const noexcept { return reason == Reject::none; }
};

class TxRejected : public Error {
public:
    TxRejected(Reject reason, const std::string& detail)
        : Error(Errc::rejected, std::string(reject_name(reason)) + (detail.empty() ? "" : ": " + detail)), reason_(reason) {}

    Reject reason() const noexcept { return reason_; }

private:
    Reject reason_;
};

class Ledger;

/// Everything a payload-gate verifier may inspect when a gated output is
/// claimed. `ledger` exposes mined state only.
struct GateContext {
    const Ledger& ledger;
    const OutPoint& spent;
    const TxOutput& spent_output;
    const Transaction& spending_tx;
    const PayloadGateLock& gate;
};

using PayloadVerifier = std::function<bool(const GateContext&)>;

struct Block {
    std::uint64_t height = 0;
    /// Logical clock at which the block's transactions were validated.
    std::uint64_t clock = 0;
    std::vector<Transaction> txs;
    std::vector<Txid> ids;
};

struct BlockSummary {
    std::uint64_t height = 0;
    std::uint64_t clock_after = 0;
    std::vector<Txid> included;
    std::vector<std::pair<Txid, Reject>> evicted;
    std::size_t still_pending = 0;
};

struct SubmitReceipt {
    Txid txid;
    /// Queued but waiting for its locktime.
    bool pending_locktime = false;
};

/// Deterministic single-writer UTXO ledger with an on-demand miner.
///
/// Mutation goes through submit/mint/mine_block. Const members read mined
/// state only and never mutate, so they may run concurrently with each other.
class Ledger {
public:
    explicit Ledger(ChainConfig config = {});

    const ChainConfig& config() const noexcept { return config_; }
    std::uint64_t clock() const noexcept { return clock_; }
    std::uint64_t height() const noexcept { return blocks_.size(); }

    Txid id_of(const Transaction& tx) const { return txid(tx, config_.txid_bytes()); }

    /// Checks the three validity conditions (time, scripts, unredeemed
    /// inputs) plus payload size and value conservation against mined state.
    Verdict validate(const Transaction& tx) const;

    /// Queues a transaction. Throws TxRejected unless it validates now or
    /// fails only on its locktime.
    SubmitReceipt submit(Transaction tx);

    /// Queues a coinbase for the next block.
    Txid mint(std::vector<TxOutput> outputs);
    Txid faucet(const crypto::VerifyKey& to, std::uint64_t amount);

    /// Includes every currently valid mempool transaction in FIFO order,
    /// evicts ones that became invalid, then advances the clock by one tick.
    BlockSummary mine_block();
    /// Mines until clock() >= target.
    void mine_until(std::uint64_t target);

    const Transaction* find(const Txid& id) const;
    bool is_mined(const Txid& id) const { return find(id) != nullptr; }
    bool in_mempool(const Txid& id) const;
    std::optional<std::uint64_t> block_of(const Txid& id) const;

    /// Embedded payload of a mined transaction. A split3 head is reassembled
    /// by following its two back-links. Throws Error(not_found) for unknown
    /// ids and Error(corrupt_chain) for broken split links.
    Bytes read_payload(const Txid& id) const;
    /// The raw payload record of a mined transaction, without reassembly.
    Payload read_fragment(const Txid& id) const;

    const std::map<OutPoint, TxOutput>& utxo() const noexcept { return utxo_; }
    std::optional<Txid> spender_of(const OutPoint& op) const;
    /// True if some queued transaction already spends `op`.
    bool mempool_spends(const OutPoint& op) const;
    std::uint64_t balance(const crypto::VerifyKey& vk) const;

    std::uint64_t minted_total() const noexcept { return minted_; }
    std::uint64_t fees_total() const noexcept { return fees_; }
    std::uint64_t utxo_total() const noexcept;

    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const std::deque<std::pair<Txid, Transaction>>& mempool() const noexcept { return mempool_; }

    void register_verifier(std::string id, PayloadVerifier verifier);
    bool has_verifier(const std::string& id) const { return verifiers_.contains(id); }

    /// Simulates miners ignoring transactions: while the filter returns
    /// false for a transaction it stays queued.
    void set_inclusion_filter(std::function<bool(const Txid&, const Transaction&)> filter);
    void clear_inclusion_filter() { filter_ = nullptr; }

    /// Versioned binary image: header, config, counters, length-prefixed
    /// blocks, mempool. load(dump()) re-dumps byte-identically.
    Bytes dump() const;
    static Ledger load(ByteView image);

private:
    Verdict check(const Transaction& tx, const Txid& id, bool enforce_locktime) const;
    bool check_script(const Transaction& tx, const TxInput& in, const TxOutput& spent, Verdict& v) const;
    void apply(const Transaction& tx, const Txid& id);

    ChainConfig config_;
    std::uint64_t clock_ = 0;
    std::uint64_t mint_counter_ = 0;
    std::uint64_t minted_ = 0;
    std::uint64_t fees_ = 0;
    std::vector<Block> blocks_;
    std::map<Txid, std::pair<std::size_t, std::size_t>> index_;
    std::map<OutPoint, TxOutput> utxo_;
    std::map<OutPoint, Txid> spent_;
    std::deque<std::pair<Txid, Transaction>> mempool_;
    std::vector<std::pair<Txid, Transaction>> pending_mints_;
    std::map<std::string, PayloadVerifier> verifiers_;
    std::function<bool(const Txid&, const Transaction&)> filter_;
};

}  // namespace bcsse::chain
