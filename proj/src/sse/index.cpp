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

#include "bcsse/serial.hpp"
#include "bcsse/sse.hpp"

#include <algorithm>
#include <cctype>

namespace bcsse::sse {

namespace {

constexpr std::uint8_t kIndexArrayVersion = 1;

ByteView view(std::string_view s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

void count(OpStats* stats, std::uint64_t OpStats::*field, std::uint64_t n = 1) {
    if (stats) stats->*field += n;
}

}  // namespace

std::string_view scheme_name(Scheme s) noexcept { return s == Scheme::A ? "A" : "B"; }

Scheme parse_scheme(std::string_view s) {
    if (s == "A" || s == "a") return Scheme::A;
    if (s == "B" || s == "b") return Scheme::B;
    throw Error(Errc::parameter, "scheme must be A or B, got '" + std::string(s) + "'");
}

PostingLists build_posting_lists(std::span<const Document> docs, const std::map<std::uint64_t, Txid>& doc_txids,
                                 std::size_t txid_bytes, std::span<const std::string> dictionary) {
    std::set<std::string> words(dictionary.begin(), dictionary.end());
    const bool explicit_dictionary = !dictionary.empty();
    for (const auto& d : docs)
        for (const auto& w : d.keywords) {
            if (explicit_dictionary && !words.contains(w))
                throw Error(Errc::parameter, "keyword '" + w + "' is not in the dictionary");
            words.insert(w);
        }

    std::vector<const Document*> ordered;
    for (const auto& d : docs) ordered.push_back(&d);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

    PostingLists lists;
    for (const auto& w : words) lists[w].keyword = w;
    for (const Document* d : ordered) {
        auto it = doc_txids.find(d->doc_id);
        if (it == doc_txids.end()) throw Error(Errc::parameter, "no txid for document " + std::to_string(d->doc_id));
        for (const auto& w : d->keywords) lists[w].entries.push_back(it->second);
    }

    std::size_t delta = 0;
    for (auto& [w, list] : lists) {
        list.matched = list.entries.size();
        delta = std::max(delta, list.matched);
    }
    for (auto& [w, list] : lists) list.entries.resize(delta, Txid::zero(txid_bytes));
    return lists;
}

std::size_t padded_length(const PostingLists& lists) noexcept {
    return lists.empty() ? 0 : lists.begin()->second.entries.size();
}

Bytes serialize_posting_list(const PostingList& list) {
    Bytes out;
    for (const auto& id : list.entries) append(out, id.bytes());
    return out;
}

std::vector<Txid> parse_posting_list(ByteView bytes, std::size_t txid_bytes) {
    if (txid_bytes == 0 || bytes.size() % txid_bytes != 0)
        throw Error(Errc::integrity, "posting list is not a whole number of txids");
    std::vector<Txid> out;
    for (std::size_t off = 0; off < bytes.size(); off += txid_bytes) {
        Txid id(Bytes(bytes.begin() + static_cast<std::ptrdiff_t>(off),
                      bytes.begin() + static_cast<std::ptrdiff_t>(off + txid_bytes)));
        if (!id.is_zero()) out.push_back(std::move(id));
    }
    return out;
}

KeywordTokens derive_tokens(const crypto::KeyBundle& keys, std::string_view keyword, OpStats* stats) {
    count(stats, &OpStats::prf_calls, 3);
    return {crypto::prf(crypto::PrfIndex::token, keys.k2, view(keyword)),
            crypto::prf(crypto::PrfIndex::list_key, keys.k2, view(keyword)),
            crypto::prf(crypto::PrfIndex::mac_key, keys.k2, view(keyword))};
}

Bytes chain_key(const crypto::KeyBundle& keys, std::size_t txid_bytes, OpStats* stats) {
    count(stats, &OpStats::prf_calls);
    return crypto::prf(crypto::PrfIndex::list_key, keys.k2, Bytes(txid_bytes, 0));
}

Trapdoor derive_trapdoor(const crypto::KeyBundle& keys, std::string_view keyword, Scheme scheme,
                         std::size_t txid_bytes) {
    auto tokens = derive_tokens(keys, keyword);
    Trapdoor td{scheme, std::move(tokens.t), std::move(tokens.l), std::move(tokens.k), std::nullopt};
    if (scheme == Scheme::B) td.k11 = chain_key(keys, txid_bytes);
    return td;
}

std::vector<IndexEntry> build_index_entries(const crypto::KeyBundle& keys, const PostingLists& lists,
                                            const Ciphertexts& ciphertexts, OpStats* stats) {
    std::vector<IndexEntry> entries;
    entries.reserve(lists.size());
    for (const auto& [w, list] : lists) {
        auto tokens = derive_tokens(keys, w, stats);
        Bytes matched;
        for (std::size_t i = 0; i < list.matched; ++i) {
            auto it = ciphertexts.find(list.entries[i]);
            if (it == ciphertexts.end())
                throw Error(Errc::integrity, "no ciphertext for posting entry " + list.entries[i].hex());
            append(matched, it->second);
        }
        count(stats, &OpStats::posting_entries, list.entries.size());
        count(stats, &OpStats::det_encryptions);
        count(stats, &OpStats::keyed_hashes);
        entries.push_back(IndexEntry{std::move(tokens.t), crypto::det_encrypt(tokens.l, serialize_posting_list(list)),
                                     crypto::keyed_hash(tokens.k, matched)});
    }
    return entries;
}

Bytes serialize_index_array(std::span<const IndexEntry> entries, std::size_t delta, std::size_t txid_bytes) {
    serial::Writer w;
    w.u8(kIndexArrayVersion);
    const std::size_t token = entries.empty() ? 0 : entries.front().t.size();
    w.u8(static_cast<std::uint8_t>(token));
    w.u8(static_cast<std::uint8_t>(txid_bytes));
    w.u32(static_cast<std::uint32_t>(delta));
    w.u32(static_cast<std::uint32_t>(entries.size()));
    for (const auto& e : entries) w.raw(e.serialize());
    return std::move(w).take();
}

std::vector<IndexEntry> parse_index_array(ByteView bytes) {
    serial::Reader r(bytes);
    if (r.u8() != kIndexArrayVersion) throw Error(Errc::integrity, "unknown index array version");
    const std::size_t token = r.u8();
    const std::size_t txid_bytes = r.u8();
    const std::size_t delta = r.u32();
    const std::size_t m = r.u32();
    const std::size_t e_len = crypto::kDetOverhead + delta * txid_bytes;
    std::vector<IndexEntry> entries;
    entries.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        IndexEntry e;
        e.t = r.raw(token);
        e.e = r.raw(e_len);
        e.h = r.raw(token);
        entries.push_back(std::move(e));
    }
    r.expect_done();
    return entries;
}

IndexRecord parse_index_record(ByteView plain, std::size_t token_bytes, std::size_t txid_bytes) {
    const std::size_t fixed = 2 * token_bytes + txid_bytes;
    if (plain.size() < fixed + crypto::kDetOverhead) throw Error(Errc::integrity, "index record too short");
    auto at = [&](std::size_t off, std::size_t len) {
        return Bytes(plain.begin() + static_cast<std::ptrdiff_t>(off),
                     plain.begin() + static_cast<std::ptrdiff_t>(off + len));
    };
    const std::size_t e_len = plain.size() - fixed;
    IndexRecord rec;
    rec.entry.t = at(0, token_bytes);
    rec.entry.e = at(token_bytes, e_len);
    rec.entry.h = at(token_bytes + e_len, token_bytes);
    rec.prev = Txid(at(2 * token_bytes + e_len, txid_bytes));
    return rec;
}

}  // namespace bcsse::sse
