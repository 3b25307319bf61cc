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

#include "bcsse/chain/embed.hpp"

namespace bcsse::chain {

/// Number of blocks a poster waits for inclusion before giving up.
struct ConfirmPolicy {
    std::uint64_t max_blocks = 1;
};

/// A party's key plus coin selection over single-signature outputs.
class Wallet {
public:
    Wallet(std::string name, crypto::SigningKey key) : name_(std::move(name)), key_(std::move(key)) {}

    const std::string& name() const noexcept { return name_; }
    const crypto::SigningKey& key() const noexcept { return key_; }
    const crypto::VerifyKey& vk() const noexcept { return key_.verify_key(); }

    std::uint64_t balance(const Ledger& ledger) const { return ledger.balance(vk()); }

    /// Smallest spendable coin worth at least min_value that no queued
    /// transaction already spends.
    std::optional<OutPoint> select_coin(const Ledger& ledger, std::uint64_t min_value) const;

    /// Spends coins covering sum(outputs) + fee; change returns to this
    /// wallet. Signed. Throws Error(funding).
    Transaction build_transfer(const Ledger& ledger, std::vector<TxOutput> outputs, std::uint64_t fee) const;

    /// Spends one coin back to this wallet with `payload` attached to the
    /// change output. Signed. Throws Error(funding).
    Transaction build_payload_tx(const Ledger& ledger, Payload payload, std::uint64_t fee) const;

    /// Witness = one signature per input.
    void sign_all(Transaction& tx) const;

private:
    std::string name_;
    crypto::SigningKey key_;
};

/// Submits and mines until the transaction is included. Throws
/// Error(store_timeout) if it is still queued after policy.max_blocks blocks,
/// TxRejected if the ledger refuses it.
Txid confirm(Ledger& ledger, Transaction tx, ConfirmPolicy policy = {});

/// Posts every fragment of `plan` from `wallet`, confirming each before the
/// next so that back-links name mined transactions. Returns the fragment
/// txids in posting order; the last one is the readable head.
std::vector<Txid> post_plan(Ledger& ledger, const Wallet& wallet, const EmbedPlan& plan, std::uint64_t fee,
                            ConfirmPolicy policy = {});

}  // namespace bcsse::chain
