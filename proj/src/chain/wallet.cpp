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

#include "bcsse/chain/wallet.hpp"

#include <algorithm>

namespace bcsse::chain {

namespace {

bool owned_by(const TxOutput& out, const crypto::VerifyKey& vk) {
    auto* s = std::get_if<SigLock>(&out.script);
    return s && s->vk == vk;
}

}  // namespace

std::optional<OutPoint> Wallet::select_coin(const Ledger& ledger, std::uint64_t min_value) const {
    std::optional<OutPoint> best;
    std::uint64_t best_value = 0;
    for (const auto& [op, out] : ledger.utxo()) {
        if (!owned_by(out, vk()) || out.value < min_value || ledger.mempool_spends(op)) continue;
        if (!best || out.value < best_value) {
            best = op;
            best_value = out.value;
        }
    }
    return best;
}

Transaction Wallet::build_transfer(const Ledger& ledger, std::vector<TxOutput> outputs, std::uint64_t fee) const {
    std::uint64_t need = fee;
    for (const auto& o : outputs) need += o.value;

    Transaction tx;
    std::uint64_t have = 0;
    // Largest coins first keeps the input count small.
    std::vector<std::pair<std::uint64_t, OutPoint>> coins;
    for (const auto& [op, out] : ledger.utxo())
        if (owned_by(out, vk()) && !ledger.mempool_spends(op)) coins.emplace_back(out.value, op);
    std::stable_sort(coins.begin(), coins.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [value, op] : coins) {
        if (have >= need && !tx.inputs.empty()) break;
        tx.inputs.push_back(TxInput{op, {}});
        have += value;
    }
    if (have < need || tx.inputs.empty())
        throw Error(Errc::funding, name_ + " holds " + std::to_string(have) + ", needs " + std::to_string(need));
    tx.outputs = std::move(outputs);
    if (have > need) tx.outputs.push_back(TxOutput{have - need, make_sig_script(vk()), std::nullopt});
    sign_all(tx);
    return tx;
}

Transaction Wallet::build_payload_tx(const Ledger& ledger, Payload payload, std::uint64_t fee) const {
    auto coin = select_coin(ledger, fee);
    if (!coin) throw Error(Errc::funding, name_ + " has no coin covering fee " + std::to_string(fee));
    const std::uint64_t value = ledger.utxo().at(*coin).value;
    Transaction tx;
    tx.inputs.push_back(TxInput{*coin, {}});
    tx.outputs.push_back(TxOutput{value - fee, make_sig_script(vk()), std::move(payload)});
    sign_all(tx);
    return tx;
}

void Wallet::sign_all(Transaction& tx) const {
    Bytes sig = sign_body(tx, key_);
    for (auto& in : tx.inputs) in.witness = {sig};
}

Txid confirm(Ledger& ledger, Transaction tx, ConfirmPolicy policy) {
    Txid id = ledger.submit(std::move(tx)).txid;
    for (std::uint64_t i = 0; i < policy.max_blocks; ++i) {
        ledger.mine_block();
        if (ledger.is_mined(id)) return id;
        if (!ledger.in_mempool(id)) throw Error(Errc::store_timeout, "transaction " + id.hex() + " was evicted");
    }
    throw Error(Errc::store_timeout,
                "transaction " + id.hex() + " not mined within " + std::to_string(policy.max_blocks) + " blocks");
}

}  // namespace bcsse::chain
