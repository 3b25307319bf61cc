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

#include "bcsse/workspace.hpp"

#include <chrono>
#include <cstdio>

namespace bcsse::workspace {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string keyword_name(std::uint64_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "kw%06llu", static_cast<unsigned long long>(i));
    return buf;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
    std::vector<BenchRow> rows;
    for (std::uint64_t pairs : opts.pair_counts) {
        if (pairs == 0 || pairs % 20 != 0 || pairs < 40)
            throw Error(Errc::parameter, "pair count " + std::to_string(pairs) + " is not a multiple of 20 (>= 40)");
        const std::uint64_t n = pairs / 4;
        const std::uint64_t m = pairs / 10;

        std::vector<sse::Document> docs(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            docs[i].doc_id = i + 1;
            docs[i].plaintext = to_bytes("synthetic document " + std::to_string(i + 1));
            for (std::uint64_t j = 0; j < 4; ++j) docs[i].keywords.insert(keyword_name((4 * i + j) % m));
        }

        chain::ChainConfig cfg;
        cfg.embed_limit = opts.embed_limit;
        cfg.txid_bits = opts.txid_bits;
        cfg.security_bits = opts.security_bits;
        chain::Ledger ledger(cfg);
        const Bytes seed = crypto::sha256(concat({opts.seed, to_bytes("/" + std::to_string(pairs))}));
        chain::Wallet owner("owner", scenario::party_key(seed, "owner"));
        ledger.faucet(owner.vk(), 1);
        ledger.mine_block();
        crypto::DeterministicEntropy entropy(scenario::owner_entropy_seed(seed));
        const auto keys = crypto::gen(opts.security_bits, entropy);

        sse::OpStats build;
        auto start = Clock::now();
        auto corpus = sse::publish_corpus(ledger, owner, keys, docs, sse::Scheme::B, entropy, {}, &build);
        const double index_ms = ms_since(start);
        if (opts.on_index) opts.on_index(ledger, corpus);

        for (std::uint64_t j = 1; j <= m; ++j) {
            auto td = sse::derive_trapdoor(keys, keyword_name(j - 1), sse::Scheme::B, cfg.txid_bytes());
            sse::OpStats search;
            start = Clock::now();
            auto found = sse::phi_search_B(ledger, td, corpus.locator, &search);
            const double search_ms = ms_since(start);
            if (!found) throw Error(Errc::integrity, "bench keyword " + keyword_name(j - 1) + " not found");
            rows.push_back(BenchRow{pairs, m, n, build.build_ops(), index_ms, j, found->hops, search.tx_read, search_ms});
        }
    }
    return rows;
}

std::string bench_tsv(std::span<const BenchRow> rows) {
    std::string out = "pairs\tkeywords\tdocuments\tindex_ops\tindex_ms\tkeyword_pos\thops\ttx_reads\tsearch_ms\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%llu\t%llu\t%llu\t%llu\t%.3f\t%llu\t%llu\t%llu\t%.3f\n",
                      static_cast<unsigned long long>(r.pairs), static_cast<unsigned long long>(r.keywords),
                      static_cast<unsigned long long>(r.documents), static_cast<unsigned long long>(r.index_ops),
                      r.index_ms, static_cast<unsigned long long>(r.keyword_pos),
                      static_cast<unsigned long long>(r.hops), static_cast<unsigned long long>(r.tx_reads),
                      r.search_ms);
        out += buf;
    }
    return out;
}

}  // namespace bcsse::workspace
