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

#include "support.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef BCSSE_VECTORS
#error "BCSSE_VECTORS must name the frozen vector file"
#endif

namespace bcsse::testing {

const nlohmann::json& vectors() {
    static const nlohmann::json v = [] {
        std::ifstream in(BCSSE_VECTORS);
        if (!in) throw std::runtime_error("cannot open " + std::string(BCSSE_VECTORS));
        return nlohmann::json::parse(in);
    }();
    return v;
}

Bytes hex(const nlohmann::json& j) { return from_hex(j.get<std::string>()); }

crypto::KeyBundle fixed_keys(unsigned bits, std::string_view label) {
    crypto::DeterministicEntropy e(crypto::sha256(to_bytes(label)));
    return crypto::gen(bits, e);
}

World::World(chain::ChainConfig cfg, std::uint64_t funds, std::string_view seed)
    : ledger(cfg),
      owner("owner", scenario::party_key(to_bytes(seed), "owner")),
      uprime("uprime", scenario::party_key(to_bytes(seed), "uprime")),
      q("q", scenario::party_key(to_bytes(seed), "q")) {
    protocol::install_verifiers(ledger);
    for (const auto* w : {&owner, &uprime, &q}) ledger.faucet(w->vk(), funds);
    ledger.mine_block();
}

RandomCorpus random_corpus(std::mt19937_64& rng, const CorpusSpec& spec) {
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    RandomCorpus c;
    const std::size_t m = pick(1, spec.max_keywords);
    for (std::size_t i = 0; i < m; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "k%02zu", i);
        c.dictionary.emplace_back(name);
    }
    const std::size_t n = pick(1, spec.max_docs);
    for (std::size_t i = 0; i < n; ++i) {
        sse::Document d;
        d.doc_id = i + 1;
        const std::size_t len = pick(0, spec.max_doc_bytes);
        for (std::size_t b = 0; b < len; ++b) d.plaintext.push_back(static_cast<std::uint8_t>(pick(0, 255)));
        const std::size_t kw = pick(1, std::min<std::size_t>(m, 4));
        while (d.keywords.size() < kw) d.keywords.insert(c.dictionary[pick(0, m - 1)]);
        c.docs.push_back(std::move(d));
    }
    std::shuffle(c.docs.begin(), c.docs.end(), rng);
    return c;
}

std::vector<Bytes> oracle_matches(std::span<const sse::Document> docs, std::string_view keyword) {
    std::vector<const sse::Document*> hits;
    for (const auto& d : docs)
        for (const auto& w : d.keywords)
            if (w == keyword) hits.push_back(&d);
    std::sort(hits.begin(), hits.end(), [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
    std::vector<Bytes> out;
    for (auto* d : hits) out.push_back(d->plaintext);
    return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    const double mean = sy / n;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fit = f.intercept + f.slope * x[i];
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    f.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return f;
}

std::string random_script(std::mt19937_64& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    static const char* kWords[] = {"alpha", "beta", "gamma", "delta", "eps"};
    std::ostringstream s;
    s << "world fund owner " << pick(5, 50) << "\n";
    s << "world fund uprime " << pick(20, 200) << "\n";
    if (pick(0, 3)) s << "world fund q " << pick(1, 30) << "\n";

    const int docs = pick(1, 6);
    for (int d = 1; d <= docs; ++d) {
        std::string kws;
        for (int w = 0; w < 5; ++w)
            if (pick(0, 2) == 0) kws += (kws.empty() ? "" : ",") + std::string(kWords[w]);
        if (kws.empty()) kws = kWords[pick(0, 4)];
        s << "owner doc " << d << " " << kws << " text of document " << d;
        for (int r = pick(0, 40); r > 0; --r) s << " w" << pick(0, 999);
        s << "\n";
    }
    s << "owner index " << (pick(0, 1) ? "A" : "B") << "\n";

    int offers = 0;
    const int steps = pick(6, 24);
    for (int i = 0; i < steps; ++i) {
        const int o = offers ? pick(1, offers + 1) : 1;
        switch (pick(0, 11)) {
            case 0:
            case 1: {
                const char* kw = pick(0, 5) ? kWords[pick(0, 4)] : "absent";
                s << "uprime ask " << kw << " " << pick(1, 40) << " t=+" << pick(1, 9);
                if (pick(0, 3) == 0) s << " max_delay=" << pick(1, 4);
                if (pick(0, 9) == 0) s << " refuse";
                s << "\n";
                ++offers;
                break;
            }
            case 2:
            case 3: s << "world mine " << pick(1, 3) << "\n"; break;
            case 4:
            case 5: s << "q fulfill offer-" << o << "\n"; break;
            case 6: s << "q tamper offer-" << o << " doc=" << pick(0, 1) << " byte=" << pick(0, 40) << "\n"; break;
            case 7: s << "q subset offer-" << o << " keep=" << (pick(0, 1) ? "0" : "") << (pick(0, 1) ? " rehash" : "") << "\n"; break;
            case 8: s << "uprime refund offer-" << o << "\n"; break;
            case 9: s << "uprime abort offer-" << o << "\n"; break;
            case 10: s << (pick(0, 1) ? "world censor offer-" + std::to_string(o) : std::string("world release")) << "\n"; break;
            default: s << "uprime decrypt offer-" << o << "\n"; break;
        }
    }
    s << "world release\n";
    s << "world mine 14\n";
    for (int o = 1; o <= offers; ++o) s << "uprime refund offer-" << o << "\n";
    s << "world mine 2\n";
    return s.str();
}

Bytes public_bytes(const scenario::Scenario& s) {
    Bytes out;
    for (const auto& b : s.ledger().blocks())
        for (const auto& tx : b.txs) append(out, chain::serialize(tx));
    for (const auto& [id, tx] : s.ledger().mempool()) append(out, chain::serialize(tx));
    append(out, to_bytes(s.transcript_text()));
    return out;
}

}  // namespace bcsse::testing
