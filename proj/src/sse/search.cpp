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

#include "bcsse/sse.hpp"

namespace bcsse::sse {

namespace {

/// Decrypts e_w, fetches every listed document and checks the MAC.
SearchResult open_entry(const chain::Ledger& ledger, const Trapdoor& td, const IndexEntry& entry, std::size_t hops,
                        OpStats* stats) {
    Bytes list;
    try {
        list = crypto::det_decrypt(td.l, entry.e);
    } catch (const Error& e) {
        throw Error(Errc::integrity, std::string("posting list does not decrypt: ") + e.what());
    }
    if (stats) ++stats->det_decryptions;

    SearchResult result;
    result.hops = hops;
    result.h = entry.h;
    result.doc_txids = parse_posting_list(list, ledger.config().txid_bytes());
    Bytes joined;
    for (const auto& id : result.doc_txids) {
        result.ciphertexts.push_back(resolve_document(ledger, id, stats));
        append(joined, result.ciphertexts.back());
    }
    if (stats) ++stats->keyed_hashes;
    result.verified = crypto::keyed_hash(td.k, joined) == entry.h;
    return result;
}

}  // namespace

std::optional<SearchResult> phi_search_A(const chain::Ledger& ledger, const Trapdoor& trapdoor, const Txid& inx,
                                         OpStats* stats) {
    Bytes array = ledger.read_payload(inx);
    if (stats) ++stats->tx_read;
    for (const auto& entry : parse_index_array(array))
        if (entry.t == trapdoor.t) return open_entry(ledger, trapdoor, entry, 1, stats);
    return std::nullopt;
}

std::optional<SearchResult> phi_search_B(const chain::Ledger& ledger, const Trapdoor& trapdoor, const Txid& head,
                                         OpStats* stats) {
    if (!trapdoor.k11) throw Error(Errc::parameter, "scheme B search needs K11 in the trapdoor");
    std::size_t hops = 0;
    Txid at = head;
    while (!at.is_zero()) {
        if (hops > ledger.height()) throw Error(Errc::corrupt_chain, "index chain does not terminate");
        IndexRecord rec = read_index_record(ledger, at, *trapdoor.k11, trapdoor.t.size());
        ++hops;
        if (stats) {
            ++stats->tx_read;
            ++stats->det_decryptions;
        }
        if (rec.entry.t == trapdoor.t) return open_entry(ledger, trapdoor, rec.entry, hops, stats);
        at = std::move(rec.prev);
    }
    return std::nullopt;
}

std::optional<SearchResult> phi_search(const chain::Ledger& ledger, const Trapdoor& trapdoor, const Txid& locator,
                                       OpStats* stats) {
    return trapdoor.scheme == Scheme::A ? phi_search_A(ledger, trapdoor, locator, stats)
                                        : phi_search_B(ledger, trapdoor, locator, stats);
}

std::vector<Bytes> decrypt_results(const crypto::KeyBundle& keys, std::span<const Bytes> ciphertexts) {
    std::vector<Bytes> out;
    out.reserve(ciphertexts.size());
    for (std::size_t i = 0; i < ciphertexts.size(); ++i) {
        try {
            out.push_back(crypto::sym_decrypt(keys.k1, ciphertexts[i]));
        } catch (const Error& e) {
            throw Error(Errc::integrity, "result ciphertext #" + std::to_string(i) + " does not decrypt: " + e.what());
        }
    }
    return out;
}

PublishedCorpus publish_corpus(chain::Ledger& ledger, const chain::Wallet& owner, const crypto::KeyBundle& keys,
                               std::span<const Document> docs, Scheme scheme, crypto::EntropySource& entropy,
                               const PublishOptions& opts, OpStats* stats) {
    if (keys.security_bits() != ledger.config().security_bits)
        throw Error(Errc::configuration, "key bundle is " + std::to_string(keys.security_bits()) +
                                             "-bit but the chain is configured for " +
                                             std::to_string(ledger.config().security_bits));
    PublishedCorpus out;
    out.scheme = scheme;
    for (const auto& d : docs) {
        if (out.doc_txids.contains(d.doc_id))
            throw Error(Errc::parameter, "duplicate document id " + std::to_string(d.doc_id));
        Bytes c = crypto::sym_encrypt(keys.k1, d.plaintext, entropy);
        if (stats) ++stats->sym_encryptions;
        Txid id = scheme == Scheme::A ? store_document_A(ledger, owner, c, opts.post, stats)
                                      : store_document_B(ledger, owner, c, opts.post, stats);
        out.ciphertexts.emplace(id, std::move(c));
        out.doc_txids.emplace(d.doc_id, std::move(id));
    }
    out.lists = build_posting_lists(docs, out.doc_txids, ledger.config().txid_bytes(), opts.dictionary);
    out.delta = padded_length(out.lists);
    out.entries = build_index_entries(keys, out.lists, out.ciphertexts, stats);
    if (scheme == Scheme::A)
        out.locator = store_index_A(ledger, owner, out.entries, out.delta, opts.post, stats);
    else
        out.locator = build_index_B(ledger, owner, keys, out.entries, opts.embedding, opts.post, stats);
    return out;
}

}  // namespace bcsse::sse
