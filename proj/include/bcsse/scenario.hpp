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

// Line-oriented party scripts driving the search protocol end to end.
//
//   world  fund PARTY AMOUNT | mine [N] | censor offer-N | release
//   owner  doc ID KW[,KW...] TEXT... | index A|B
//   uprime ask KEYWORD DEPOSIT t=T|t=+D [max_delay=M] [refuse]
//          abort offer-N | refund offer-N | decrypt offer-N
//   q      fulfill offer-N
//          tamper offer-N doc=I byte=J [xor=V] [rehash]
//          tamper-mac offer-N byte=J [xor=V]
//          subset offer-N keep=I[,I...] [rehash]
//
// Blank lines and lines starting with '#' are skipped. Offers are numbered
// from 1 in ask order. Every step appends one JSON record to the
// transcript; a step whose module operation fails records the error and the
// run continues. A malformed line throws Error(validation) naming its line.

#include "bcsse/protocol.hpp"

#include <json.hpp>

namespace bcsse::scenario {

struct Config {
    chain::ChainConfig chain;
    Bytes seed;
    sse::IndexEmbedding embedding = sse::IndexEmbedding::encrypted;
    std::uint64_t fee = 0;
    std::uint64_t max_delay = 2;
};

struct OfferState {
    protocol::SignedAsk ask;
    std::string keyword;
    bool return_attempted = false;
    bool fuse_attempted = false;
    std::vector<chain::Txid> return_txids;
};

inline constexpr std::string_view kParties[] = {"owner", "uprime", "q"};

/// Signing key of `party`, derived from the deployment seed.
crypto::SigningKey party_key(ByteView seed, std::string_view party);
/// Seed of the owner's entropy stream (key generation, document encryption).
Bytes owner_entropy_seed(ByteView seed);

class Scenario {
public:
    explicit Scenario(Config config);

    /// Runs every line of `script`.
    void run(std::string_view script);
    /// Runs one line; `line_no` is reported in validation errors.
    void step(std::string_view line, std::size_t line_no);

    const chain::Ledger& ledger() const noexcept { return ledger_; }
    const std::vector<nlohmann::json>& transcript() const noexcept { return transcript_; }
    const std::vector<OfferState>& offers() const noexcept { return offers_; }
    const std::vector<sse::Document>& documents() const noexcept { return docs_; }
    const std::optional<sse::PublishedCorpus>& corpus() const noexcept { return corpus_; }
    const crypto::KeyBundle& owner_keys() const noexcept { return keys_; }
    const chain::Wallet& wallet(std::string_view party) const;

    /// Transcript as newline-terminated JSON lines.
    std::string transcript_text() const;

private:
    using Args = std::vector<std::string>;

    void world(const std::string& action, const Args& args, nlohmann::json& rec);
    void owner(const std::string& action, const Args& args, nlohmann::json& rec);
    void uprime(const std::string& action, const Args& args, nlohmann::json& rec);
    void q(const std::string& action, const Args& args, nlohmann::json& rec);
    /// Honest return payload for `offer`, as Q would compute it.
    protocol::ReturnPayload honest_payload(const OfferState& offer) const;
    void submit_adversarial(OfferState& offer, protocol::ReturnPayload payload, nlohmann::json& rec);
    OfferState& offer_arg(const std::string& token);

    Config config_;
    chain::Ledger ledger_;
    crypto::DeterministicEntropy entropy_;
    crypto::KeyBundle keys_;
    std::vector<std::pair<std::string, chain::Wallet>> wallets_;
    std::vector<sse::Document> docs_;
    std::optional<sse::PublishedCorpus> corpus_;
    std::vector<OfferState> offers_;
    std::vector<nlohmann::json> transcript_;
    std::optional<chain::Txid> censored_;
    std::size_t line_no_ = 0;
};

}  // namespace bcsse::scenario
