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

#include "bcsse/protocol.hpp"

#include "bcsse/serial.hpp"

namespace bcsse::protocol {

using chain::Payload;
using chain::PayloadKind;
using chain::TxInput;
using chain::TxOutput;

namespace {

constexpr std::uint8_t kQueryVersion = 1;
constexpr std::uint8_t kReturnVersion = 1;

void short_blob(serial::Writer& w, ByteView b) {
    if (b.size() > 255) throw Error(Errc::parameter, "query field longer than 255 bytes");
    w.u8(static_cast<std::uint8_t>(b.size()));
    w.raw(b);
}

Bytes read_short_blob(serial::Reader& r) { return r.raw(r.u8()); }

Bytes concat_all(std::span<const Bytes> parts) {
    Bytes out;
    for (const auto& p : parts) append(out, p);
    return out;
}

bool reject(std::string* why, std::string msg) {
    if (why) *why = std::move(msg);
    return false;
}

}  // namespace

Bytes serialize_query(const Query& q) {
    if (q.l.size() != q.t.size() || q.k.size() != q.t.size())
        throw Error(Errc::parameter, "query tokens differ in length");
    serial::Writer w;
    w.u8(kQueryVersion);
    w.u8(static_cast<std::uint8_t>(q.scheme));
    short_blob(w, q.t);
    w.raw(q.l);
    w.raw(q.k);
    short_blob(w, q.k11 ? ByteView(*q.k11) : ByteView());
    short_blob(w, q.locator.bytes());
    return std::move(w).take();
}

Query parse_query(ByteView bytes) {
    serial::Reader r(bytes);
    if (r.u8() != kQueryVersion) throw Error(Errc::integrity, "unknown query version");
    Query q;
    const std::uint8_t scheme = r.u8();
    if (scheme != static_cast<std::uint8_t>(Scheme::A) && scheme != static_cast<std::uint8_t>(Scheme::B))
        throw Error(Errc::integrity, "unknown scheme tag in query");
    q.scheme = static_cast<Scheme>(scheme);
    q.t = read_short_blob(r);
    q.l = r.raw(q.t.size());
    q.k = r.raw(q.t.size());
    Bytes k11 = read_short_blob(r);
    if (!k11.empty()) q.k11 = std::move(k11);
    q.locator = Txid(read_short_blob(r));
    r.expect_done();
    return q;
}

Bytes serialize_return(const ReturnPayload& ret) {
    serial::Writer w;
    w.u8(kReturnVersion);
    w.u32(static_cast<std::uint32_t>(ret.ciphertexts.size()));
    for (const auto& c : ret.ciphertexts) w.blob(c);
    w.blob(ret.h);
    return std::move(w).take();
}

ReturnPayload parse_return(ByteView bytes) {
    serial::Reader r(bytes);
    if (r.u8() != kReturnVersion) throw Error(Errc::integrity, "unknown return version");
    ReturnPayload ret;
    const std::uint32_t n = r.u32();
    if (n > r.remaining() / 4) throw Error(Errc::integrity, "return count exceeds payload");
    for (std::uint32_t i = 0; i < n; ++i) ret.ciphertexts.push_back(r.blob());
    ret.h = r.blob();
    r.expect_done();
    return ret;
}

bool verify_return(const chain::Ledger& ledger, const Query& query, const ReturnPayload& ret, std::string* why) {
    if (query.scheme == Scheme::B && !query.k11) return reject(why, "scheme B query without K11");

    if (crypto::keyed_hash(query.k, concat_all(ret.ciphertexts)) != ret.h)
        return reject(why, "MAC over returned ciphertexts does not match the returned digest");

    auto found = sse::phi_search(ledger, query.trapdoor(), query.locator);
    if (!found) {
        if (!ret.ciphertexts.empty()) return reject(why, "keyword is not indexed but documents were returned");
        return true;
    }
    if (ret.h != found->h) return reject(why, "returned digest differs from the indexed digest");
    if (ret.ciphertexts.size() != found->ciphertexts.size())
        return reject(why, "returned " + std::to_string(ret.ciphertexts.size()) + " documents, index lists " +
                               std::to_string(found->ciphertexts.size()));
    for (std::size_t i = 0; i < ret.ciphertexts.size(); ++i)
        if (ret.ciphertexts[i].size() != found->ciphertexts[i].size())
            return reject(why, "returned document #" + std::to_string(i) + " has the wrong length");
    return true;
}

void install_verifiers(chain::Ledger& ledger) {
    ledger.register_verifier(std::string(kReturnVerifier), [](const chain::GateContext& ctx) {
        if (!ctx.spent_output.payload) return false;
        Query query = parse_query(ctx.spent_output.payload->data);
        if (ctx.gate.argument != Bytes{static_cast<std::uint8_t>(query.scheme)}) return false;
        const Payload* p = ctx.spending_tx.payload();
        if (!p) return false;
        ReturnPayload ret = parse_return(sse::follow_chunks(ctx.ledger, *p));
        return verify_return(ctx.ledger, query, ret);
    });
}

FuseCosigner honest_cosigner(const crypto::SigningKey& searcher) {
    return [searcher](const Transaction& fuse) -> std::optional<Bytes> { return chain::sign_body(fuse, searcher); };
}

SignedAsk make_ask(chain::Ledger& ledger, const chain::Wallet& uprime, const crypto::KeyBundle& keys,
                   std::string_view keyword, Scheme scheme, const Txid& locator, std::uint64_t deposit,
                   std::uint64_t deadline, const crypto::VerifyKey& searcher, const FuseCosigner& cosigner,
                   const AskOptions& opts) {
    if (opts.max_delay >= deadline || deadline <= ledger.clock() + opts.max_delay)
        throw Error(Errc::configuration, "deadline " + std::to_string(deadline) + " leaves no room for max_delay " +
                                             std::to_string(opts.max_delay) + " at clock " +
                                             std::to_string(ledger.clock()));
    if (deposit == 0 || deposit < opts.fee)
        throw Error(Errc::parameter, "deposit " + std::to_string(deposit) + " does not cover fee " +
                                         std::to_string(opts.fee));

    auto coin = uprime.select_coin(ledger, deposit + opts.fee);
    if (!coin)
        throw Error(Errc::funding, uprime.name() + " has no coin worth " + std::to_string(deposit + opts.fee));
    const std::uint64_t coin_value = ledger.utxo().at(*coin).value;

    AskOffer offer;
    offer.funding = *coin;
    offer.deposit = deposit;
    offer.deadline = deadline;
    offer.max_delay = opts.max_delay;
    offer.fee = opts.fee;
    offer.owner = uprime.vk();
    offer.searcher = searcher;

    sse::Trapdoor td = sse::derive_trapdoor(keys, keyword, scheme, ledger.config().txid_bytes());
    offer.query = Query{scheme, td.t, td.l, td.k, td.k11, locator};

    Transaction& ask = offer.ask_tx;
    ask.inputs.push_back(TxInput{*coin, {}});
    ask.outputs.push_back(TxOutput{
        deposit,
        chain::make_payload_gate(std::string(kReturnVerifier), Bytes{static_cast<std::uint8_t>(scheme)}, searcher,
                                 uprime.vk(), searcher),
        Payload{PayloadKind::raw, serialize_query(offer.query)}});
    if (coin_value > deposit + opts.fee)
        ask.outputs.push_back(TxOutput{coin_value - deposit - opts.fee, chain::make_sig_script(uprime.vk()), {}});
    if (ask.payload_size() > ledger.config().embed_limit)
        throw Error(Errc::payload_too_large, "ask payload is " + std::to_string(ask.payload_size()) +
                                                 " bytes, embed limit is " +
                                                 std::to_string(ledger.config().embed_limit));
    uprime.sign_all(ask);
    offer.ask_txid = ledger.id_of(ask);

    FuseRefund fuse;
    fuse.fuse_tx.inputs.push_back(TxInput{offer.deposit_outpoint(), {}});
    fuse.fuse_tx.outputs.push_back(TxOutput{deposit - opts.fee, chain::make_sig_script(uprime.vk()), {}});
    fuse.fuse_tx.locktime = deadline;

    auto q_sig = cosigner ? cosigner(fuse.fuse_tx) : std::nullopt;
    if (!q_sig) throw Error(Errc::aborted, "searcher refused to sign the Fuse; ask not broadcast");
    if (!crypto::verify(searcher, chain::serialize_body(fuse.fuse_tx), *q_sig))
        throw Error(Errc::aborted, "searcher's Fuse signature does not verify; ask not broadcast");
    fuse.fuse_tx.inputs[0].witness = {chain::sign_body(fuse.fuse_tx, uprime.key()), std::move(*q_sig)};
    fuse.txid = ledger.id_of(fuse.fuse_tx);

    ledger.submit(ask);
    return {std::move(offer), std::move(fuse)};
}

Txid abort_before_inclusion(chain::Ledger& ledger, const chain::Wallet& uprime, const AskOffer& offer) {
    if (ledger.is_mined(offer.ask_txid))
        throw Error(Errc::cannot_abort, "ask " + offer.ask_txid.hex() + " is already mined; use the Fuse");
    if (ledger.clock() + offer.max_delay < offer.deadline)
        throw Error(Errc::cannot_abort, "abort allowed from clock " + std::to_string(offer.deadline - offer.max_delay) +
                                            ", now " + std::to_string(ledger.clock()));
    auto it = ledger.utxo().find(offer.funding);
    if (it == ledger.utxo().end()) throw Error(Errc::cannot_abort, "funding coin is no longer unspent");
    if (it->second.value < offer.fee) throw Error(Errc::funding, "funding coin does not cover the fee");

    Transaction tx;
    tx.inputs.push_back(TxInput{offer.funding, {}});
    tx.outputs.push_back(TxOutput{it->second.value - offer.fee, chain::make_sig_script(uprime.vk()), {}});
    uprime.sign_all(tx);
    return ledger.submit(std::move(tx)).txid;
}

ReturnClaim build_return(chain::Ledger& ledger, const chain::Wallet& q, const AskOffer& offer, ReturnPayload payload,
                         const FulfillOptions& opts) {
    if (opts.fee > offer.deposit) throw Error(Errc::parameter, "fee exceeds the deposit");
    const std::size_t iota = ledger.config().embed_limit;
    const std::size_t link = ledger.config().txid_bytes();

    ReturnClaim claim;
    Bytes bytes = serialize_return(payload);
    claim.payload = std::move(payload);

    Payload carried;
    if (bytes.size() <= iota) {
        carried = Payload{PayloadKind::raw, std::move(bytes)};
    } else {
        sse::ChunkPlan plan = sse::chunk_ciphertext(bytes, iota, link);
        Txid prev = Txid::zero(link);
        for (std::size_t i = 0; i + 1 < plan.count(); ++i) {
            Bytes data = concat({plan.chunks[i], prev.bytes()});
            prev = chain::confirm(ledger, q.build_payload_tx(ledger, Payload{PayloadKind::chunk, std::move(data)}, 0),
                                  opts.confirm);
            claim.carriers.push_back(prev);
        }
        carried = Payload{PayloadKind::chunk, concat({plan.chunks.back(), prev.bytes()})};
    }

    Transaction& tx = claim.return_tx;
    tx.inputs.push_back(TxInput{offer.deposit_outpoint(), {}});
    tx.outputs.push_back(TxOutput{offer.deposit - opts.fee, chain::make_sig_script(q.vk()), std::move(carried)});
    tx.inputs[0].witness = {chain::sign_body(tx, q.key())};
    claim.txid = ledger.id_of(tx);
    return claim;
}

void submit_return(chain::Ledger& ledger, const ReturnClaim& claim) {
    try {
        ledger.submit(claim.return_tx);
    } catch (const chain::TxRejected& e) {
        throw Error(Errc::claim_rejected, std::string("return rejected: ") + e.what());
    }
}

ReturnClaim fulfill(chain::Ledger& ledger, const chain::Wallet& q, const AskOffer& offer,
                    const FulfillOptions& opts) {
    const Transaction* ask = ledger.find(offer.ask_txid);
    if (!ask) throw Error(Errc::parameter, "ask " + offer.ask_txid.hex() + " is not mined");
    if (ledger.clock() >= offer.deadline)
        throw Error(Errc::parameter, "deadline " + std::to_string(offer.deadline) + " has passed");
    if (ask->outputs.empty() || !ask->outputs[0].payload)
        throw Error(Errc::integrity, "ask " + offer.ask_txid.hex() + " carries no query");
    Query query = parse_query(ask->outputs[0].payload->data);

    ReturnPayload payload;
    if (auto found = sse::phi_search(ledger, query.trapdoor(), query.locator)) {
        if (!found->verified) throw Error(Errc::integrity, "search result does not match its indexed MAC");
        payload.ciphertexts = std::move(found->ciphertexts);
        payload.h = std::move(found->h);
    } else {
        payload.h = crypto::keyed_hash(query.k, {});
    }
    ReturnClaim claim = build_return(ledger, q, offer, std::move(payload), opts);
    submit_return(ledger, claim);
    return claim;
}

Txid refund_after_timeout(chain::Ledger& ledger, const AskOffer& offer, const FuseRefund& fuse) {
    if (ledger.clock() < offer.deadline)
        throw chain::TxRejected(chain::Reject::locktime_not_reached,
                                "Fuse locktime " + std::to_string(offer.deadline) + " > clock " +
                                    std::to_string(ledger.clock()));
    return ledger.submit(fuse.fuse_tx).txid;
}

ReturnPayload read_return(const chain::Ledger& ledger, const Txid& return_txid) {
    const Transaction* tx = ledger.find(return_txid);
    if (!tx) throw Error(Errc::not_found, "no mined return " + return_txid.hex());
    const Payload* p = tx->payload();
    if (!p) throw Error(Errc::integrity, "transaction " + return_txid.hex() + " carries no result");
    return parse_return(sse::follow_chunks(ledger, *p));
}

}  // namespace bcsse::protocol
