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

// Paid search: the requester U' locks a deposit in an ask transaction
// whose output can be claimed by the searcher Q with a return transaction
// carrying the right results, or refunded to U' through the pre-signed
// time-locked Fuse transaction.

#include "bcsse/sse.hpp"

#include <functional>

namespace bcsse::protocol {

using chain::OutPoint;
using chain::Transaction;
using chain::Txid;
using sse::Scheme;

/// Verifier id carried by every ask output.
inline constexpr std::string_view kReturnVerifier = "bcsse/return/v1";

/// Search request carried in the ask output: trapdoor plus index locator.
struct Query {
    Scheme scheme = Scheme::A;
    Bytes t;
    Bytes l;
    Bytes k;
    std::optional<Bytes> k11;
    Txid locator;

    sse::Trapdoor trapdoor() const { return {scheme, t, l, k, k11}; }
    friend bool operator==(const Query&, const Query&) = default;
};

Bytes serialize_query(const Query& q);
/// Throws Error(integrity) on malformed bytes.
Query parse_query(ByteView bytes);

/// ({C_1..C_n}, h_w) as embedded in a return transaction.
struct ReturnPayload {
    std::vector<Bytes> ciphertexts;
    Bytes h;
    friend bool operator==(const ReturnPayload&, const ReturnPayload&) = default;
};

Bytes serialize_return(const ReturnPayload& r);
ReturnPayload parse_return(ByteView bytes);

/// The miner-side check behind the ask output. Accepts iff
///   keyed_hash(k_w, C_1 || ... || C_n) == h,
///   h equals the digest stored in the index entry found with t_w, and
///   the number and lengths of the C_i match the listed documents.
/// A keyword absent from the index accepts only the empty result.
bool verify_return(const chain::Ledger& ledger, const Query& query, const ReturnPayload& ret,
                   std::string* why = nullptr);

/// Registers verify_return under kReturnVerifier. Needed on every ledger
/// instance, including ones restored with Ledger::load.
void install_verifiers(chain::Ledger& ledger);

struct AskOffer {
    Transaction ask_tx;
    Txid ask_txid;
    /// T_q, the coin funding the deposit.
    OutPoint funding;
    Query query;
    std::uint64_t deposit = 0;
    std::uint64_t deadline = 0;
    std::uint64_t max_delay = 2;
    std::uint64_t fee = 0;
    crypto::VerifyKey owner;
    crypto::VerifyKey searcher;

    OutPoint deposit_outpoint() const { return {ask_txid, 0}; }
};

/// Spends the ask output back to U' with locktime = deadline. Witness is
/// (sig U', sig Q).
struct FuseRefund {
    Transaction fuse_tx;
    Txid txid;
};

struct SignedAsk {
    AskOffer offer;
    FuseRefund fuse;
};

/// Q's side of the Fuse exchange: returns Q's signature over the Fuse
/// body, or nullopt to refuse.
using FuseCosigner = std::function<std::optional<Bytes>(const Transaction& fuse)>;

FuseCosigner honest_cosigner(const crypto::SigningKey& searcher);

struct AskOptions {
    std::uint64_t max_delay = 2;
    std::uint64_t fee = 0;
};

/// Builds the ask, obtains Q's Fuse signature, then submits the ask.
/// Throws Error(configuration) if the deadline leaves no room for
/// max_delay, Error(funding) without a coin covering deposit + fee, and
/// Error(aborted) if Q refuses or mis-signs the Fuse; nothing is broadcast
/// in those cases.
SignedAsk make_ask(chain::Ledger& ledger, const chain::Wallet& uprime, const crypto::KeyBundle& keys,
                   std::string_view keyword, Scheme scheme, const Txid& locator, std::uint64_t deposit,
                   std::uint64_t deadline, const crypto::VerifyKey& searcher, const FuseCosigner& cosigner,
                   const AskOptions& opts = {});

/// Redeems T_q back to U' while the ask is still unmined. Throws
/// Error(cannot_abort) once the ask is mined or before deadline - max_delay.
Txid abort_before_inclusion(chain::Ledger& ledger, const chain::Wallet& uprime, const AskOffer& offer);

struct FulfillOptions {
    std::uint64_t fee = 0;
    /// Applies to the chunk transactions a large result needs.
    chain::ConfirmPolicy confirm;
};

struct ReturnClaim {
    Transaction return_tx;
    Txid txid;
    ReturnPayload payload;
    /// Chunk transactions carrying the front of an oversized result.
    std::vector<Txid> carriers;
};

/// Builds and signs a return for an arbitrary payload. A payload larger
/// than the embed limit is split into backward-linked chunks, all but the
/// last posted and confirmed from Q's wallet first. Does not submit.
ReturnClaim build_return(chain::Ledger& ledger, const chain::Wallet& q, const AskOffer& offer, ReturnPayload payload,
                         const FulfillOptions& opts = {});

/// Throws Error(claim_rejected) if the ledger refuses the return.
void submit_return(chain::Ledger& ledger, const ReturnClaim& claim);

/// Honest Q: reads the query from the mined ask, runs the search and
/// submits the return. Throws Error(parameter) if the ask is not mined or
/// the deadline has passed, Error(integrity) if the search result fails
/// its own MAC, Error(claim_rejected) if the ledger refuses the return.
ReturnClaim fulfill(chain::Ledger& ledger, const chain::Wallet& q, const AskOffer& offer,
                    const FulfillOptions& opts = {});

/// Submits the Fuse. Throws TxRejected(locktime_not_reached) before the
/// deadline and TxRejected(double_spend) if the ask output is spent.
Txid refund_after_timeout(chain::Ledger& ledger, const AskOffer& offer, const FuseRefund& fuse);

/// Result carried by a mined return transaction.
ReturnPayload read_return(const chain::Ledger& ledger, const Txid& return_txid);

}  // namespace bcsse::protocol
