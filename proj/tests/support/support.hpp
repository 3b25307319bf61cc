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

// Shared test fixtures: oracles that never call into the code under test
// beyond building its inputs.

#include "bcsse/protocol.hpp"
#include "bcsse/scenario.hpp"

#include <json.hpp>

#include <random>

namespace bcsse::testing {

/// Frozen vectors written by tests/oracle/gen_vectors.py.
const nlohmann::json& vectors();

Bytes hex(const nlohmann::json& j);

crypto::KeyBundle fixed_keys(unsigned bits = 256, std::string_view label = "fixture");

/// Ledger with the return verifier installed and `wallets` funded.
struct World {
    chain::Ledger ledger;
    chain::Wallet owner;
    chain::Wallet uprime;
    chain::Wallet q;

    explicit World(chain::ChainConfig cfg = {}, std::uint64_t funds = 1000, std::string_view seed = "world");
};

struct CorpusSpec {
    std::size_t max_docs = 50;
    std::size_t max_keywords = 20;
    std::size_t max_doc_bytes = 400;
};

/// Random documents over a dictionary "k00".."kNN". Every document gets at
/// least one keyword.
struct RandomCorpus {
    std::vector<sse::Document> docs;
    std::vector<std::string> dictionary;
};

RandomCorpus random_corpus(std::mt19937_64& rng, const CorpusSpec& spec);

/// Plaintext scan: the plaintexts of documents tagged with `keyword`, in
/// ascending id order.
std::vector<Bytes> oracle_matches(std::span<const sse::Document> docs, std::string_view keyword);

/// Ordinary least squares fit y = a + b x and its coefficient of
/// determination.
struct LineFit {
    double intercept = 0;
    double slope = 0;
    double r2 = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Random but well-formed party script for the ledger safety suites.
std::string random_script(std::mt19937_64& rng);

/// Every byte string that a scenario leaves behind: serialized mined
/// transactions, the mempool and the transcript text.
Bytes public_bytes(const scenario::Scenario& s);

}  // namespace bcsse::testing
