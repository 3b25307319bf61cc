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

#include <algorithm>

namespace bcsse::sse {

using chain::Payload;
using chain::PayloadKind;

namespace {

Txid post(chain::Ledger& ledger, const chain::Wallet& owner, Payload payload, const PostOptions& opts,
          OpStats* stats) {
    if (stats) ++stats->tx_written;
    return chain::confirm(ledger, owner.build_payload_tx(ledger, std::move(payload), opts.fee), opts.confirm);
}

void require_fits(std::size_t size, std::size_t limit, const std::string& what) {
    if (size > limit)
        throw Error(Errc::payload_too_large, what + " is " + std::to_string(size) + " bytes, embed limit is " +
                                                 std::to_string(limit));
}

}  // namespace

ChunkPlan chunk_ciphertext(ByteView c, std::size_t iota, std::size_t link_bytes) {
    if (iota <= link_bytes)
        throw Error(Errc::parameter, "embed limit " + std::to_string(iota) + " leaves no room beside a " +
                                         std::to_string(link_bytes) + "-byte link");
    const std::size_t room = iota - link_bytes;
    ChunkPlan plan;
    for (std::size_t off = 0; off < c.size(); off += room) {
        const std::size_t len = std::min(room, c.size() - off);
        plan.chunks.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(off),
                                 c.begin() + static_cast<std::ptrdiff_t>(off + len));
    }
    return plan;
}

Bytes reassemble(std::span<const Bytes> chunks) {
    Bytes out;
    for (const auto& c : chunks) append(out, c);
    return out;
}

Txid store_document_A(chain::Ledger& ledger, const chain::Wallet& owner, ByteView ciphertext, const PostOptions& opts,
                      OpStats* stats) {
    require_fits(ciphertext.size(), ledger.config().embed_limit, "document ciphertext");
    return post(ledger, owner, Payload{PayloadKind::raw, Bytes(ciphertext.begin(), ciphertext.end())}, opts, stats);
}

Txid store_document_B(chain::Ledger& ledger, const chain::Wallet& owner, ByteView ciphertext, const PostOptions& opts,
                      OpStats* stats) {
    const std::size_t iota = ledger.config().embed_limit;
    const std::size_t link = ledger.config().txid_bytes();
    if (ciphertext.size() <= iota)
        return post(ledger, owner, Payload{PayloadKind::raw, Bytes(ciphertext.begin(), ciphertext.end())}, opts,
                    stats);

    ChunkPlan plan = chunk_ciphertext(ciphertext, iota, link);
    Txid prev = Txid::zero(link);
    for (auto& chunk : plan.chunks) {
        Bytes data = std::move(chunk);
        append(data, prev.bytes());
        prev = post(ledger, owner, Payload{PayloadKind::chunk, std::move(data)}, opts, stats);
    }
    return prev;
}

Txid store_index_A(chain::Ledger& ledger, const chain::Wallet& owner, std::span<const IndexEntry> entries,
                   std::size_t delta, const PostOptions& opts, OpStats* stats) {
    Bytes array = serialize_index_array(entries, delta, ledger.config().txid_bytes());
    require_fits(array.size(), ledger.config().embed_limit, "scheme A index array");
    return post(ledger, owner, Payload{PayloadKind::raw, std::move(array)}, opts, stats);
}

Txid build_index_B(chain::Ledger& ledger, const chain::Wallet& owner, const crypto::KeyBundle& keys,
                   std::span<const IndexEntry> entries, IndexEmbedding embedding, const PostOptions& opts,
                   OpStats* stats) {
    if (entries.empty()) throw Error(Errc::parameter, "scheme B index needs at least one keyword");
    const std::size_t link = ledger.config().txid_bytes();
    const std::size_t iota = ledger.config().embed_limit;
    const std::size_t token = entries.front().t.size();
    const Bytes k11 = chain_key(keys, link, stats);

    // Every record has the same length, so checking the first one up front
    // avoids leaving a half-built chain behind.
    const std::size_t record_plain = entries.front().serialize().size() + link;
    if (embedding == IndexEmbedding::encrypted) {
        require_fits(record_plain + crypto::kDetOverhead, iota, "encrypted index record");
    } else {
        chain::embed_payload(Bytes(record_plain, 0), chain::EmbedMode::split3, iota, link, {token, token});
    }

    Txid prev = Txid::zero(link);
    for (const auto& entry : entries) {
        Bytes plain = concat({entry.serialize(), prev.bytes()});
        if (embedding == IndexEmbedding::encrypted) {
            if (stats) ++stats->det_encryptions;
            prev = post(ledger, owner, Payload{PayloadKind::raw, crypto::det_encrypt(k11, plain)}, opts, stats);
        } else {
            auto plan = chain::embed_payload(plain, chain::EmbedMode::split3, iota, link, {token, token});
            if (stats) stats->tx_written += plan.fragments.size();
            prev = chain::post_plan(ledger, owner, plan, opts.fee, opts.confirm).back();
        }
    }
    return prev;
}

IndexRecord read_index_record(const chain::Ledger& ledger, const Txid& at, ByteView k11, std::size_t token_bytes) {
    const std::size_t link = ledger.config().txid_bytes();
    chain::Payload head;
    try {
        head = ledger.read_fragment(at);
    } catch (const Error& e) {
        if (e.code() == Errc::not_found) throw Error(Errc::corrupt_chain, "index record " + at.hex() + " is missing");
        throw;
    }
    if (head.kind == PayloadKind::split3) return parse_index_record(ledger.read_payload(at), token_bytes, link);
    if (head.kind != PayloadKind::raw) throw Error(Errc::corrupt_chain, "transaction " + at.hex() + " is not an index record");
    Bytes plain;
    try {
        plain = crypto::det_decrypt(k11, head.data);
    } catch (const Error& e) {
        throw Error(Errc::authentication, "index record " + at.hex() + ": " + e.what());
    }
    return parse_index_record(plain, token_bytes, link);
}

Bytes follow_chunks(const chain::Ledger& ledger, Payload p, OpStats* stats) {
    const std::size_t link = ledger.config().txid_bytes();
    if (p.kind == PayloadKind::raw) return std::move(p.data);
    if (p.kind != PayloadKind::chunk) throw Error(Errc::corrupt_chain, "payload is not a document chunk");

    std::vector<Bytes> reversed;
    for (std::uint64_t steps = 0;; ++steps) {
        if (p.data.size() < link) throw Error(Errc::corrupt_chain, "chunk shorter than its link");
        Txid back(Bytes(p.data.end() - static_cast<std::ptrdiff_t>(link), p.data.end()));
        p.data.resize(p.data.size() - link);
        reversed.push_back(std::move(p.data));
        if (back.is_zero()) break;
        if (steps > ledger.height()) throw Error(Errc::corrupt_chain, "chunk chain does not terminate");
        const chain::Transaction* tx = ledger.find(back);
        if (!tx || !tx->payload() || tx->payload()->kind != PayloadKind::chunk)
            throw Error(Errc::corrupt_chain, "chunk " + back.hex() + " missing from the ledger");
        p = *tx->payload();
        if (stats) ++stats->tx_read;
    }
    return reassemble(std::vector<Bytes>(reversed.rbegin(), reversed.rend()));
}

Bytes resolve_document(const chain::Ledger& ledger, const Txid& id, OpStats* stats) {
    Payload p = ledger.read_fragment(id);
    if (stats) ++stats->tx_read;
    if (p.kind != PayloadKind::raw && p.kind != PayloadKind::chunk)
        throw Error(Errc::corrupt_chain, "transaction " + id.hex() + " holds no document");
    return follow_chunks(ledger, std::move(p), stats);
}

}  // namespace bcsse::sse
