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

#include "bcsse/scenario.hpp"

#include <charconv>

namespace bcsse::scenario {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::validation, msg); }

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        invalid(std::string(what) + " must be a non-negative integer, got '" + std::string(s) + "'");
    return v;
}

/// Value of a key=value token, or nullopt if `token` has another key.
std::optional<std::string_view> option(std::string_view token, std::string_view key) {
    if (token.size() <= key.size() || token.substr(0, key.size()) != key || token[key.size()] != '=')
        return std::nullopt;
    return token.substr(key.size() + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Whitespace tokens; `rest` receives the text after the first `keep` tokens.
std::vector<std::string> tokenize(std::string_view line, std::size_t keep, std::string& rest) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (i < line.size()) {
        while (i < line.size() && space(line[i])) ++i;
        if (i >= line.size()) break;
        if (out.size() == keep) {
            rest = std::string(line.substr(i));
            while (!rest.empty() && space(rest.back())) rest.pop_back();
            break;
        }
        std::size_t j = i;
        while (j < line.size() && !space(line[j])) ++j;
        out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

void expect_args(const std::vector<std::string>& args, std::size_t min, std::size_t max, std::string_view usage) {
    if (args.size() < min || args.size() > max) invalid("usage: " + std::string(usage));
}

chain::Ledger make_ledger(const chain::ChainConfig& cfg) {
    chain::Ledger ledger(cfg);
    protocol::install_verifiers(ledger);
    return ledger;
}

}  // namespace

crypto::SigningKey party_key(ByteView seed, std::string_view party) {
    return crypto::SigningKey(crypto::sha256(concat({to_bytes("bcsse/party/v1/"), to_bytes(party), to_bytes("/"), seed})));
}

Bytes owner_entropy_seed(ByteView seed) { return crypto::sha256(concat({to_bytes("bcsse/owner/v1/"), seed})); }

Scenario::Scenario(Config config)
    : config_(std::move(config)),
      ledger_(make_ledger(config_.chain)),
      entropy_(owner_entropy_seed(config_.seed)),
      keys_(crypto::gen(config_.chain.security_bits, entropy_)) {
    for (auto name : kParties)
        wallets_.emplace_back(std::string(name),
                              chain::Wallet(std::string(name), party_key(config_.seed, name)));
}

const chain::Wallet& Scenario::wallet(std::string_view party) const {
    for (const auto& [name, w] : wallets_)
        if (name == party) return w;
    throw Error(Errc::parameter, "unknown party '" + std::string(party) + "'");
}

std::string Scenario::transcript_text() const {
    std::string out;
    for (const auto& rec : transcript_) out += rec.dump() + "\n";
    return out;
}

void Scenario::run(std::string_view script) {
    std::size_t no = 0;
    for (const auto& line : split(script, '\n')) step(line, ++no);
}

void Scenario::step(std::string_view line, std::size_t line_no) {
    line_no_ = line_no;
    std::string rest;
    auto head = tokenize(line, 2, rest);
    if (head.empty() || head[0][0] == '#') return;
    try {
        if (head.size() < 2) invalid("expected PARTY ACTION");
        const std::string& party = head[0];
        const std::string& action = head[1];
        Args args;
        if (party == "owner" && action == "doc") {
            std::string text;
            args = tokenize(rest, 2, text);
            if (args.size() < 2) invalid("usage: owner doc ID KW[,KW...] TEXT...");
            args.push_back(text);
        } else {
            std::string unused;
            args = tokenize(rest, SIZE_MAX, unused);
        }

        std::map<std::string, std::uint64_t> before;
        for (const auto& [name, w] : wallets_) before[name] = w.balance(ledger_);

        json rec;
        rec["seq"] = transcript_.size() + 1;
        rec["line"] = line_no;
        rec["party"] = party;
        rec["action"] = action;
        rec["args"] = args;
        rec["ok"] = true;
        rec["txid"] = nullptr;
        rec["detail"] = json::object();
        try {
            if (party == "world")
                world(action, args, rec);
            else if (party == "owner")
                owner(action, args, rec);
            else if (party == "uprime")
                uprime(action, args, rec);
            else if (party == "q")
                q(action, args, rec);
            else
                invalid("unknown party '" + party + "'");
        } catch (const chain::TxRejected& e) {
            rec["ok"] = false;
            rec["error"] = {{"code", errc_name(e.code())}, {"reason", reject_name(e.reason())}, {"message", e.what()}};
        } catch (const Error& e) {
            if (e.code() == Errc::validation) throw;
            rec["ok"] = false;
            rec["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
        }

        json deltas = json::object();
        for (const auto& [name, w] : wallets_) {
            auto now = static_cast<std::int64_t>(w.balance(ledger_));
            auto was = static_cast<std::int64_t>(before[name]);
            if (now != was) deltas[name] = now - was;
        }
        rec["deltas"] = deltas;
        rec["clock"] = ledger_.clock();
        transcript_.push_back(std::move(rec));
    } catch (const Error& e) {
        if (e.code() != Errc::validation) throw;
        throw Error(Errc::validation, "script line " + std::to_string(line_no) + ": " + e.what());
    }
}

OfferState& Scenario::offer_arg(const std::string& token) {
    if (token.rfind("offer-", 0) != 0) invalid("expected offer-N, got '" + token + "'");
    const std::uint64_t idx = parse_u64(std::string_view(token).substr(6), "offer number");
    if (idx == 0 || idx > offers_.size()) throw Error(Errc::not_found, "no " + token);
    return offers_[idx - 1];
}

void Scenario::world(const std::string& action, const Args& args, json& rec) {
    if (action == "fund") {
        expect_args(args, 2, 2, "world fund PARTY AMOUNT");
        const chain::Wallet* w = nullptr;
        for (const auto& [name, wl] : wallets_)
            if (name == args[0]) w = &wl;
        if (!w) invalid("unknown party '" + args[0] + "'");
        const std::uint64_t amount = parse_u64(args[1], "amount");
        rec["txid"] = ledger_.faucet(w->vk(), amount).hex();
        ledger_.mine_block();
    } else if (action == "mine") {
        expect_args(args, 0, 1, "world mine [N]");
        const std::uint64_t n = args.empty() ? 1 : parse_u64(args[0], "block count");
        std::size_t included = 0;
        json evicted = json::array();
        for (std::uint64_t i = 0; i < n; ++i) {
            auto s = ledger_.mine_block();
            included += s.included.size();
            for (const auto& [id, why] : s.evicted) evicted.push_back({{"txid", id.hex()}, {"reason", reject_name(why)}});
        }
        rec["detail"] = {{"blocks", n}, {"included", included}, {"evicted", evicted}};
    } else if (action == "censor") {
        expect_args(args, 1, 1, "world censor offer-N");
        OfferState& o = offer_arg(args[0]);
        censored_ = o.ask.offer.ask_txid;
        ledger_.set_inclusion_filter([id = *censored_](const chain::Txid& t, const chain::Transaction&) { return t != id; });
        rec["txid"] = censored_->hex();
    } else if (action == "release") {
        expect_args(args, 0, 0, "world release");
        censored_.reset();
        ledger_.clear_inclusion_filter();
    } else {
        invalid("unknown world action '" + action + "'");
    }
}

void Scenario::owner(const std::string& action, const Args& args, json& rec) {
    if (action == "doc") {
        sse::Document d;
        d.doc_id = parse_u64(args[0], "document id");
        for (const auto& kw : split(args[1], ',')) {
            if (kw.empty()) invalid("empty keyword in '" + args[1] + "'");
            d.keywords.insert(kw);
        }
        d.plaintext = to_bytes(args[2]);
        for (const auto& other : docs_)
            if (other.doc_id == d.doc_id) throw Error(Errc::parameter, "duplicate document id " + args[0]);
        rec["detail"] = {{"doc_id", d.doc_id}, {"keywords", d.keywords.size()}, {"bytes", d.plaintext.size()}};
        docs_.push_back(std::move(d));
    } else if (action == "index") {
        expect_args(args, 1, 1, "owner index A|B");
        sse::Scheme scheme;
        try {
            scheme = sse::parse_scheme(args[0]);
        } catch (const Error& e) {
            invalid(e.what());
        }
        if (docs_.empty()) throw Error(Errc::parameter, "no documents to index");
        sse::PublishOptions opts;
        opts.post.fee = config_.fee;
        opts.embedding = config_.embedding;
        corpus_ = sse::publish_corpus(ledger_, wallet("owner"), keys_, docs_, scheme, entropy_, opts);
        rec["txid"] = corpus_->locator.hex();
        rec["detail"] = {{"scheme", sse::scheme_name(scheme)},
                         {"documents", corpus_->doc_txids.size()},
                         {"keywords", corpus_->entries.size()},
                         {"delta", corpus_->delta}};
    } else {
        invalid("unknown owner action '" + action + "'");
    }
}

void Scenario::uprime(const std::string& action, const Args& args, json& rec) {
    if (action == "ask") {
        if (args.size() < 3) invalid("usage: uprime ask KEYWORD DEPOSIT t=T|t=+D [max_delay=M] [refuse]");
        const std::string& keyword = args[0];
        const std::uint64_t deposit = parse_u64(args[1], "deposit");
        auto t = option(args[2], "t");
        if (!t) invalid("expected t=T or t=+D, got '" + args[2] + "'");
        const bool relative = !t->empty() && t->front() == '+';
        const std::uint64_t t_val = parse_u64(relative ? t->substr(1) : *t, "deadline");
        protocol::AskOptions opts{config_.max_delay, config_.fee};
        bool refuse = false;
        for (std::size_t i = 3; i < args.size(); ++i) {
            if (auto m = option(args[i], "max_delay"))
                opts.max_delay = parse_u64(*m, "max_delay");
            else if (args[i] == "refuse")
                refuse = true;
            else
                invalid("unexpected ask argument '" + args[i] + "'");
        }
        if (!corpus_) throw Error(Errc::parameter, "no index has been published");
        const std::uint64_t deadline = relative ? ledger_.clock() + t_val : t_val;
        protocol::FuseCosigner cosigner =
            refuse ? protocol::FuseCosigner([](const chain::Transaction&) { return std::optional<Bytes>(); })
                   : protocol::honest_cosigner(wallet("q").key());
        OfferState o;
        o.keyword = keyword;
        o.ask = protocol::make_ask(ledger_, wallet("uprime"), keys_, keyword, corpus_->scheme, corpus_->locator,
                                   deposit, deadline, wallet("q").vk(), cosigner, opts);
        offers_.push_back(std::move(o));
        const auto& offer = offers_.back().ask;
        rec["txid"] = offer.offer.ask_txid.hex();
        rec["detail"] = {{"offer", "offer-" + std::to_string(offers_.size())},
                         {"deposit", deposit},
                         {"deadline", deadline},
                         {"fuse", offer.fuse.txid.hex()}};
    } else if (action == "abort") {
        expect_args(args, 1, 1, "uprime abort offer-N");
        OfferState& o = offer_arg(args[0]);
        rec["txid"] = protocol::abort_before_inclusion(ledger_, wallet("uprime"), o.ask.offer).hex();
    } else if (action == "refund") {
        expect_args(args, 1, 1, "uprime refund offer-N");
        OfferState& o = offer_arg(args[0]);
        o.fuse_attempted = true;
        rec["txid"] = protocol::refund_after_timeout(ledger_, o.ask.offer, o.ask.fuse).hex();
    } else if (action == "decrypt") {
        expect_args(args, 1, 1, "uprime decrypt offer-N");
        OfferState& o = offer_arg(args[0]);
        auto spender = ledger_.spender_of(o.ask.offer.deposit_outpoint());
        if (!spender) throw Error(Errc::not_found, "no mined return for " + args[0]);
        if (*spender == o.ask.fuse.txid) throw Error(Errc::not_found, args[0] + " was refunded through the Fuse");
        auto ret = protocol::read_return(ledger_, *spender);
        auto plain = sse::decrypt_results(keys_, ret.ciphertexts);
        json docs = json::array();
        for (const auto& p : plain) docs.push_back(to_string(p));
        rec["txid"] = spender->hex();
        rec["detail"] = {{"documents", docs}};
    } else {
        invalid("unknown uprime action '" + action + "'");
    }
}

protocol::ReturnPayload Scenario::honest_payload(const OfferState& offer) const {
    const auto& query = offer.ask.offer.query;
    protocol::ReturnPayload p;
    if (auto found = sse::phi_search(ledger_, query.trapdoor(), query.locator)) {
        p.ciphertexts = std::move(found->ciphertexts);
        p.h = std::move(found->h);
    } else {
        p.h = crypto::keyed_hash(query.k, {});
    }
    return p;
}

void Scenario::submit_adversarial(OfferState& offer, protocol::ReturnPayload payload, json& rec) {
    offer.return_attempted = true;
    protocol::FulfillOptions opts{config_.fee, {}};
    auto claim = protocol::build_return(ledger_, wallet("q"), offer.ask.offer, std::move(payload), opts);
    rec["txid"] = claim.txid.hex();
    protocol::submit_return(ledger_, claim);
    offer.return_txids.push_back(claim.txid);
}

void Scenario::q(const std::string& action, const Args& args, json& rec) {
    if (action == "fulfill") {
        expect_args(args, 1, 1, "q fulfill offer-N");
        OfferState& o = offer_arg(args[0]);
        o.return_attempted = true;
        auto claim = protocol::fulfill(ledger_, wallet("q"), o.ask.offer, {config_.fee, {}});
        o.return_txids.push_back(claim.txid);
        rec["txid"] = claim.txid.hex();
        rec["detail"] = {{"documents", claim.payload.ciphertexts.size()}, {"carriers", claim.carriers.size()}};
        return;
    }

    bool rehash = false;
    std::optional<std::uint64_t> doc, byte;
    std::uint64_t mask = 1;
    std::optional<std::vector<std::size_t>> keep;
    if (args.empty()) invalid("q " + action + " needs an offer");
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "rehash")
            rehash = true;
        else if (auto v = option(args[i], "doc"))
            doc = parse_u64(*v, "doc");
        else if (auto v = option(args[i], "byte"))
            byte = parse_u64(*v, "byte");
        else if (auto v = option(args[i], "xor"))
            mask = parse_u64(*v, "xor");
        else if (args[i] == "keep=")
            keep.emplace();
        else if (auto v = option(args[i], "keep")) {
            keep.emplace();
            for (const auto& k : split(*v, ',')) keep->push_back(parse_u64(k, "keep index"));
        } else
            invalid("unexpected argument '" + args[i] + "'");
    }
    if (mask == 0 || mask > 255) invalid("xor must be in 1..255");

    if (action == "tamper") {
        if (!doc || !byte) invalid("usage: q tamper offer-N doc=I byte=J [xor=V] [rehash]");
    } else if (action == "tamper-mac") {
        if (!byte || rehash || doc) invalid("usage: q tamper-mac offer-N byte=J [xor=V]");
    } else if (action == "subset") {
        if (!keep) invalid("usage: q subset offer-N keep=I[,I...] [rehash]");
    } else {
        invalid("unknown q action '" + action + "'");
    }

    OfferState& o = offer_arg(args[0]);
    protocol::ReturnPayload p = honest_payload(o);
    const auto flip = static_cast<std::uint8_t>(mask);
    if (action == "tamper") {
        if (*doc >= p.ciphertexts.size() || *byte >= p.ciphertexts[*doc].size())
            throw Error(Errc::parameter, "no byte " + std::to_string(*byte) + " in result " + std::to_string(*doc));
        p.ciphertexts[*doc][*byte] ^= flip;
    } else if (action == "tamper-mac") {
        if (*byte >= p.h.size()) throw Error(Errc::parameter, "digest has no byte " + std::to_string(*byte));
        p.h[*byte] ^= flip;
    } else {
        std::vector<Bytes> kept;
        for (auto i : *keep) {
            if (i >= p.ciphertexts.size()) throw Error(Errc::parameter, "no result " + std::to_string(i));
            kept.push_back(p.ciphertexts[i]);
        }
        p.ciphertexts = std::move(kept);
    }
    if (rehash) {
        Bytes joined;
        for (const auto& c : p.ciphertexts) append(joined, c);
        p.h = crypto::keyed_hash(o.ask.offer.query.k, joined);
    }
    rec["detail"] = {{"documents", p.ciphertexts.size()}, {"rehash", rehash}};
    submit_adversarial(o, std::move(p), rec);
}

}  // namespace bcsse::scenario
