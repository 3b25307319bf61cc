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

// On-disk deployment driven by the command-line tool.
//
//   config.json          chain and protocol settings
//   keys.json            owner keys and party seeds (mode 0600)
//   ledger.bin           ledger image
//   broadcast.txt        "<index locator hex> <scheme>"
//   owner.json           ingested documents and their txids
//   offers.json          asks with their signed Fuse transactions
//   transcript/transcript.jsonl
//   .lock                held for the lifetime of a Workspace

#include "bcsse/scenario.hpp"

#include <filesystem>
#include <functional>
#include <memory>

namespace bcsse::workspace {

/// Settings that may come from a flag, an environment variable or
/// config.json, in that order of precedence.
struct Settings {
    std::optional<std::string> seed;
    std::optional<std::string> scheme;
    std::optional<std::uint64_t> iota;
    std::optional<std::uint64_t> p_bits;
    std::optional<std::uint64_t> security_bits;
    std::optional<std::uint64_t> max_delay;
    std::optional<std::uint64_t> fee;
    std::optional<std::uint64_t> faucet;

    /// Sets one field from its option name ("iota", "p-bits", ...).
    /// Throws Error(parameter) for an unknown name or a malformed value.
    void set(std::string_view name, std::string_view value);
    /// Reads BCSSE_SEED, BCSSE_SCHEME, BCSSE_IOTA, BCSSE_P_BITS,
    /// BCSSE_SECURITY_BITS, BCSSE_MAX_DELAY, BCSSE_FEE, BCSSE_FAUCET.
    static Settings from_env();
    /// Fields set in `over` replace those in `base`.
    static Settings merge(const Settings& base, const Settings& over);
};

class Workspace {
public:
    /// Creates the directory if needed and takes the lock. Throws
    /// Error(locked) if another process holds it, Error(configuration) if
    /// explicit chain settings contradict an existing ledger.
    static std::unique_ptr<Workspace> open(const std::filesystem::path& dir, const Settings& flags);
    ~Workspace();

    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    /// Owner keys and the three party wallets; each wallet is funded from
    /// the faucet. Throws Error(parameter) if keys already exist.
    std::string keygen();
    /// Reads every regular file in `dir` (sorted by name). With a manifest
    /// ("FILE<TAB>KW,KW" per line) keywords come from it, otherwise from
    /// the lower-cased alphanumeric words of each file.
    std::string ingest(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& manifest);
    std::string index(const std::optional<std::string>& scheme);
    /// `deadline` is an absolute clock value or "+D" relative to now.
    std::string ask(const std::string& keyword, std::uint64_t deposit, const std::string& deadline);
    std::string fulfill(const std::string& offer);
    std::string refund(const std::string& offer);
    std::string abort(const std::string& offer);
    std::string mine(std::uint64_t blocks);
    /// One line per transaction, or just `txid`. Shows record types,
    /// links and sizes only.
    std::string inspect(const std::optional<std::string>& txid);
    std::string decrypt(const std::string& offer);
    /// Runs a script against a fresh in-memory ledger with this
    /// workspace's settings; returns the JSON-lines transcript.
    std::string scenario(const std::string& script);

    const chain::Ledger& ledger() const noexcept { return *ledger_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    Workspace() = default;

    void load();
    void require_keys() const;
    chain::Wallet wallet(std::string_view party) const;
    struct Outcome {
        std::string text;
        nlohmann::json detail = nlohmann::json::object();
        std::optional<chain::Txid> txid;
    };
    std::string command(const std::string& name, nlohmann::json args, const std::function<Outcome()>& fn);
    void save_state();
    Bytes seed_bytes() const;
    crypto::KeyBundle owner_keys() const;
    const nlohmann::json& offer_json(const std::string& id) const;
    protocol::AskOffer load_offer(const nlohmann::json& j) const;
    protocol::FuseRefund load_fuse(const nlohmann::json& j) const;

    std::filesystem::path dir_;
    int lock_fd_ = -1;
    Settings settings_;
    std::unique_ptr<chain::Ledger> ledger_;
    nlohmann::json keys_;
    nlohmann::json owner_;
    nlohmann::json offers_;
    std::uint64_t seq_ = 0;
};

struct BenchOptions {
    std::vector<std::uint64_t> pair_counts{100, 200, 400, 800};
    Bytes seed = to_bytes("bcsse-bench");
    std::size_t embed_limit = 4096;
    unsigned txid_bits = 256;
    unsigned security_bits = 256;
    /// Called with each freshly built index, before it is searched.
    std::function<void(const chain::Ledger&, const sse::PublishedCorpus&)> on_index;
};

struct BenchRow {
    std::uint64_t pairs = 0;
    std::uint64_t keywords = 0;
    std::uint64_t documents = 0;
    std::uint64_t index_ops = 0;
    double index_ms = 0;
    std::uint64_t keyword_pos = 0;
    std::uint64_t hops = 0;
    std::uint64_t tx_reads = 0;
    double search_ms = 0;
};

/// Scheme B over a synthetic corpus per pair count P: P/4 documents, each
/// tagged with 4 of P/10 keywords round-robin, so exactly P (w, id) pairs.
/// One row per keyword position. Throws Error(parameter) for P not a
/// positive multiple of 20.
std::vector<BenchRow> run_bench(const BenchOptions& opts);
std::string bench_tsv(std::span<const BenchRow> rows);

}  // namespace bcsse::workspace
