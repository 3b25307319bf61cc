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

// Searchable encryption over the ledger.
//
// Scheme A keeps the whole index array in one transaction; documents must
// each fit in one transaction. Scheme B chunks large ciphertexts into
// backward-linked transactions and stores one encrypted index record per
// keyword, each linking to the previous keyword's record.

#include "bcsse/chain/wallet.hpp"
#include "bcsse/crypto.hpp"

#include <map>
#include <optional>
#include <set>

namespace bcsse::sse {

using chain::Txid;

enum class Scheme : std::uint8_t { A = 1, B = 2 };

std::string_view scheme_name(Scheme s) noexcept;
/// Accepts "A"/"B" (case-insensitive). Throws Error(parameter).
Scheme parse_scheme(std::string_view s);

/// Counters for the portable benchmark metric.
struct OpStats {
    std::uint64_t prf_calls = 0;
    std::uint64_t sym_encryptions = 0;
    std::uint64_t det_encryptions = 0;
    std::uint64_t det_decryptions = 0;
    std::uint64_t keyed_hashes = 0;
    std::uint64_t posting_entries = 0;
    std::uint64_t tx_written = 0;
    std::uint64_t tx_read = 0;

    /// Primitive operations spent building an index.
    std::uint64_t build_ops() const noexcept {
        return prf_calls + sym_encryptions + det_encryptions + keyed_hashes + posting_entries + tx_written;
    }
};

struct Document {
    std::uint64_t doc_id = 0;
    Bytes plaintext;
    std::set<std::string> keywords;
};

/// DB(w): txids of matching documents in ascending doc_id order, padded
/// with all-zero txids to the common length.
struct PostingList {
    std::string keyword;
    std::vector<Txid> entries;
    std::size_t matched = 0;
};

/// Ordered by keyword bytes, which is the dictionary order.
using PostingLists = std::map<std::string, PostingList>;

/// `dictionary` may add keywords that match no document; it must contain
/// every document keyword when given. Throws Error(parameter) for a document
/// without a txid.
PostingLists build_posting_lists(std::span<const Document> docs, const std::map<std::uint64_t, Txid>& doc_txids,
                                 std::size_t txid_bytes, std::span<const std::string> dictionary = {});

/// Delta: the common padded length.
std::size_t padded_length(const PostingLists& lists) noexcept;

Bytes serialize_posting_list(const PostingList& list);
/// Splits into txids and drops 0^p pads.
std::vector<Txid> parse_posting_list(ByteView bytes, std::size_t txid_bytes);

/// t_w = F1(K2, w), l_w = F2(K2, w), k_w = F3(K2, w).
struct KeywordTokens {
    Bytes t;
    Bytes l;
    Bytes k;
};

KeywordTokens derive_tokens(const crypto::KeyBundle& keys, std::string_view keyword, OpStats* stats = nullptr);
/// K11 = F2(K2, 0^p).
Bytes chain_key(const crypto::KeyBundle& keys, std::size_t txid_bytes, OpStats* stats = nullptr);

struct Trapdoor {
    Scheme scheme = Scheme::A;
    Bytes t;
    Bytes l;
    Bytes k;
    /// Scheme B only.
    std::optional<Bytes> k11;

    friend bool operator==(const Trapdoor&, const Trapdoor&) = default;
};

Trapdoor derive_trapdoor(const crypto::KeyBundle& keys, std::string_view keyword, Scheme scheme,
                         std::size_t txid_bytes);

/// (t_w, e_w, h_w). Every entry of one index serializes to the same length.
struct IndexEntry {
    Bytes t;
    Bytes e;
    Bytes h;

    Bytes serialize() const { return concat({t, e, h}); }
    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

using Ciphertexts = std::map<Txid, Bytes>;

/// One entry per keyword in dictionary order. h_w covers the unpadded
/// matches in posting order. Throws Error(integrity) if a listed txid has
/// no ciphertext.
std::vector<IndexEntry> build_index_entries(const crypto::KeyBundle& keys, const PostingLists& lists,
                                            const Ciphertexts& ciphertexts, OpStats* stats = nullptr);

/// Scheme A index array encoding carried by the single index transaction.
Bytes serialize_index_array(std::span<const IndexEntry> entries, std::size_t delta, std::size_t txid_bytes);
std::vector<IndexEntry> parse_index_array(ByteView bytes);

struct ChunkPlan {
    std::vector<Bytes> chunks;
    std::size_t count() const noexcept { return chunks.size(); }
};

/// s = ceil(|c| / (iota - p)) chunks, each at most iota - p bytes, filled
/// front to back. Throws Error(parameter) if iota <= p.
ChunkPlan chunk_ciphertext(ByteView c, std::size_t iota, std::size_t link_bytes);
Bytes reassemble(std::span<const Bytes> chunks);

struct PostOptions {
    std::uint64_t fee = 0;
    chain::ConfirmPolicy confirm;
};

/// Scheme A document: one transaction. Throws Error(payload_too_large).
Txid store_document_A(chain::Ledger& ledger, const chain::Wallet& owner, ByteView ciphertext,
                      const PostOptions& opts = {}, OpStats* stats = nullptr);

/// Scheme B document: one raw transaction if |c| <= iota, else s chunk
/// transactions, chunk 1 linking 0^p and chunk k linking chunk k-1.
/// Returns the txid of the last transaction.
Txid store_document_B(chain::Ledger& ledger, const chain::Wallet& owner, ByteView ciphertext,
                      const PostOptions& opts = {}, OpStats* stats = nullptr);

/// Scheme A index: the whole array in one transaction. Throws
/// Error(payload_too_large) before posting if it cannot fit.
Txid store_index_A(chain::Ledger& ledger, const chain::Wallet& owner, std::span<const IndexEntry> entries,
                   std::size_t delta, const PostOptions& opts = {}, OpStats* stats = nullptr);

enum class IndexEmbedding : std::uint8_t {
    /// r_j = det_encrypt(K11, t || e || h || prev) in one transaction.
    encrypted,
    /// t || e || h || prev split over three unencrypted transactions, for
    /// chains whose embed limit cannot hold a whole record.
    split3_plain,
};

/// Scheme B index chain over entries in dictionary order. Returns the head
/// (the last keyword's record). Throws Error(parameter) for no entries and
/// Error(payload_too_large) before posting if a record cannot fit.
Txid build_index_B(chain::Ledger& ledger, const chain::Wallet& owner, const crypto::KeyBundle& keys,
                   std::span<const IndexEntry> entries, IndexEmbedding embedding = IndexEmbedding::encrypted,
                   const PostOptions& opts = {}, OpStats* stats = nullptr);

/// Index record plaintext t || e || h || prev.
struct IndexRecord {
    IndexEntry entry;
    Txid prev;
};

IndexRecord parse_index_record(ByteView plain, std::size_t token_bytes, std::size_t txid_bytes);

/// Reads one scheme B record, decrypting with K11 unless it was embedded
/// in split3 form.
IndexRecord read_index_record(const chain::Ledger& ledger, const Txid& at, ByteView k11, std::size_t token_bytes);

/// Bytes carried by `head` and the chunk transactions it links back to.
/// Raw payloads are returned as is. Throws Error(corrupt_chain).
Bytes follow_chunks(const chain::Ledger& ledger, chain::Payload head, OpStats* stats = nullptr);

/// Ciphertext behind a posting-list entry, following chunk links.
Bytes resolve_document(const chain::Ledger& ledger, const Txid& id, OpStats* stats = nullptr);

struct SearchResult {
    std::vector<Bytes> ciphertexts;
    std::vector<Txid> doc_txids;
    Bytes h;
    /// Index records read before the match.
    std::size_t hops = 0;
    /// keyed_hash(k_w, C_1 || ... || C_n) == h_w.
    bool verified = false;
};

/// nullopt = no_match. Throws Error(integrity) if the posting list does
/// not decrypt, Error(not_found) for a missing document transaction.
std::optional<SearchResult> phi_search_A(const chain::Ledger& ledger, const Trapdoor& trapdoor, const Txid& inx,
                                         OpStats* stats = nullptr);

/// Walks the chain from `head`. Also throws Error(corrupt_chain) for a
/// broken chunk chain.
std::optional<SearchResult> phi_search_B(const chain::Ledger& ledger, const Trapdoor& trapdoor, const Txid& head,
                                         OpStats* stats = nullptr);

std::optional<SearchResult> phi_search(const chain::Ledger& ledger, const Trapdoor& trapdoor, const Txid& locator,
                                       OpStats* stats = nullptr);

/// Throws Error(integrity) naming the failing position.
std::vector<Bytes> decrypt_results(const crypto::KeyBundle& keys, std::span<const Bytes> ciphertexts);

/// Owner-side Enc for a whole corpus.
struct PublishedCorpus {
    Scheme scheme = Scheme::A;
    /// TX_Inx for scheme A, TI_{w_m} for scheme B.
    Txid locator;
    std::map<std::uint64_t, Txid> doc_txids;
    Ciphertexts ciphertexts;
    PostingLists lists;
    std::vector<IndexEntry> entries;
    std::size_t delta = 0;
};

struct PublishOptions {
    PostOptions post;
    IndexEmbedding embedding = IndexEmbedding::encrypted;
    /// Extra dictionary keywords beyond those in the documents.
    std::vector<std::string> dictionary;
};

PublishedCorpus publish_corpus(chain::Ledger& ledger, const chain::Wallet& owner, const crypto::KeyBundle& keys,
                               std::span<const Document> docs, Scheme scheme, crypto::EntropySource& entropy,
                               const PublishOptions& opts = {}, OpStats* stats = nullptr);

}  // namespace bcsse::sse
