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

#include <doctest.h>

#include "bcsse/protocol.hpp"
#include "support.hpp"

using namespace bcsse;
using namespace bcsse::protocol;
using bcsse::testing::World;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::parameter;
}

struct Setup {
    World world;
    crypto::KeyBundle keys = testing::fixed_keys();
    sse::PublishedCorpus corpus;

    explicit Setup(Scheme scheme = Scheme::B, std::size_t iota = 4096)
        : world(chain::ChainConfig{iota, 256, 256, 1}, 100) {
        std::vector<sse::Document> docs{
            {1, to_bytes("first w"), {"w", "x"}},
            {2, to_bytes("second"), {"x"}},
            {3, to_bytes("third w"), {"w", "x"}},
        };
        crypto::DeterministicEntropy e(to_bytes("protocol"));
        corpus = sse::publish_corpus(world.ledger, world.owner, keys, docs, scheme, e);
    }

    SignedAsk ask(const std::string& w, std::uint64_t deposit, std::uint64_t in_ticks, AskOptions opts = {}) {
        return make_ask(world.ledger, world.uprime, keys, w, corpus.scheme, corpus.locator, deposit,
                        world.ledger.clock() + in_ticks, world.q.vk(), honest_cosigner(world.q.key()), opts);
    }

    ReturnPayload honest(const AskOffer& offer) {
        auto found = sse::phi_search(world.ledger, offer.query.trapdoor(), offer.query.locator);
        ReturnPayload p;
        if (found) {
            p.ciphertexts = found->ciphertexts;
            p.h = found->h;
        } else {
            p.h = crypto::keyed_hash(offer.query.k, {});
        }
        return p;
    }

    bool accepted(const AskOffer& offer, ReturnPayload p) {
        auto claim = build_return(world.ledger, world.q, offer, std::move(p));
        return world.ledger.validate(claim.return_tx).ok();
    }
};

}  // namespace

TEST_CASE("query and return encodings round-trip") {
    auto keys = testing::fixed_keys(128);
    auto td = sse::derive_trapdoor(keys, "w", Scheme::B, 8);
    Query q{Scheme::B, td.t, td.l, td.k, td.k11, Txid(Bytes(8, 3))};
    Bytes b = serialize_query(q);
    CHECK(b.size() == 77);
    CHECK(parse_query(b) == q);
    Bytes trailing = b;
    trailing.push_back(0);
    CHECK_THROWS_AS(parse_query(trailing), Error);

    ReturnPayload r{{to_bytes("a"), {}, to_bytes("ccc")}, Bytes(32, 1)};
    CHECK(parse_return(serialize_return(r)) == r);
    CHECK_THROWS_AS(parse_return(Bytes{1, 0xff, 0xff, 0xff, 0xff}), Error);
}

TEST_CASE("make_ask: honest flow holds the Fuse unbroadcast") {
    Setup s;
    const auto before = s.world.uprime.balance(s.world.ledger);
    auto signed_ask = s.ask("w", 10, 6);
    CHECK(s.world.ledger.in_mempool(signed_ask.offer.ask_txid));
    s.world.ledger.mine_block();
    CHECK(s.world.ledger.is_mined(signed_ask.offer.ask_txid));
    CHECK_FALSE(s.world.ledger.in_mempool(signed_ask.fuse.txid));
    CHECK_FALSE(s.world.ledger.is_mined(signed_ask.fuse.txid));
    CHECK(s.world.uprime.balance(s.world.ledger) == before - 10);
    CHECK(signed_ask.fuse.fuse_tx.locktime == signed_ask.offer.deadline);
}

TEST_CASE("make_ask: refusal, funding and configuration errors broadcast nothing") {
    Setup s;
    const auto clock = s.world.ledger.clock();
    auto refuse = [](const Transaction&) { return std::optional<Bytes>(); };
    CHECK(code_of([&] {
              make_ask(s.world.ledger, s.world.uprime, s.keys, "w", Scheme::B, s.corpus.locator, 10, clock + 6,
                       s.world.q.vk(), refuse);
          }) == Errc::aborted);
    auto wrong_signer = honest_cosigner(s.world.owner.key());
    CHECK(code_of([&] {
              make_ask(s.world.ledger, s.world.uprime, s.keys, "w", Scheme::B, s.corpus.locator, 10, clock + 6,
                       s.world.q.vk(), wrong_signer);
          }) == Errc::aborted);
    CHECK(code_of([&] { s.ask("w", 1000, 6); }) == Errc::funding);
    CHECK(code_of([&] { s.ask("w", 10, 2, AskOptions{2, 0}); }) == Errc::configuration);
    CHECK(code_of([&] {
              make_ask(s.world.ledger, s.world.uprime, s.keys, "w", Scheme::B, s.corpus.locator, 10, 3,
                       s.world.q.vk(), honest_cosigner(s.world.q.key()), AskOptions{3, 0});
          }) == Errc::configuration);
    CHECK(s.world.ledger.mempool().empty());
    CHECK(s.world.uprime.balance(s.world.ledger) == 100);
}

TEST_CASE("abort: censored ask past t - max_delay redeems the funding coin") {
    Setup s;
    auto a = s.ask("w", 10, 5);
    const Txid ask_id = a.offer.ask_txid;
    s.world.ledger.set_inclusion_filter([ask_id](const Txid& t, const Transaction&) { return t != ask_id; });
    CHECK(code_of([&] { abort_before_inclusion(s.world.ledger, s.world.uprime, a.offer); }) == Errc::cannot_abort);
    s.world.ledger.mine_until(a.offer.deadline - a.offer.max_delay);
    Txid redeem = abort_before_inclusion(s.world.ledger, s.world.uprime, a.offer);
    s.world.ledger.mine_block();
    CHECK(s.world.ledger.is_mined(redeem));
    s.world.ledger.clear_inclusion_filter();
    auto summary = s.world.ledger.mine_block();
    CHECK_FALSE(s.world.ledger.is_mined(ask_id));
    REQUIRE(summary.evicted.size() == 1);
    CHECK(summary.evicted[0].first == ask_id);
    CHECK(summary.evicted[0].second == chain::Reject::double_spend);
    CHECK(s.world.uprime.balance(s.world.ledger) == 100);
}

TEST_CASE("abort: a mined ask cannot be aborted") {
    Setup s;
    auto a = s.ask("w", 10, 5);
    s.world.ledger.mine_block();
    CHECK(code_of([&] { abort_before_inclusion(s.world.ledger, s.world.uprime, a.offer); }) == Errc::cannot_abort);
}

TEST_CASE("fulfill: honest Q is paid and U' decrypts") {
    for (Scheme scheme : {Scheme::A, Scheme::B}) {
        Setup s(scheme);
        auto a = s.ask("w", 10, 6);
        CHECK(code_of([&] { fulfill(s.world.ledger, s.world.q, a.offer); }) == Errc::parameter);
        s.world.ledger.mine_block();
        auto claim = fulfill(s.world.ledger, s.world.q, a.offer);
        s.world.ledger.mine_block();
        CHECK(s.world.ledger.is_mined(claim.txid));
        CHECK(s.world.q.balance(s.world.ledger) == 110);
        CHECK(s.world.uprime.balance(s.world.ledger) == 90);
        auto plain = sse::decrypt_results(s.keys, read_return(s.world.ledger, claim.txid).ciphertexts);
        CHECK(plain == std::vector<Bytes>{to_bytes("first w"), to_bytes("third w")});
        // The Fuse now conflicts with the mined return.
        s.world.ledger.mine_until(a.offer.deadline);
        try {
            refund_after_timeout(s.world.ledger, a.offer, a.fuse);
            FAIL("expected double_spend");
        } catch (const chain::TxRejected& e) {
            CHECK(e.reason() == chain::Reject::double_spend);
        }
    }
}

TEST_CASE("fulfill: unknown keyword pays for the empty result only") {
    Setup s;
    auto a = s.ask("nothing", 10, 6);
    s.world.ledger.mine_block();
    ReturnPayload bogus{{s.corpus.ciphertexts.begin()->second}, {}};
    bogus.h = crypto::keyed_hash(a.offer.query.k, bogus.ciphertexts[0]);
    CHECK_FALSE(s.accepted(a.offer, bogus));
    auto claim = fulfill(s.world.ledger, s.world.q, a.offer);
    CHECK(claim.payload.ciphertexts.empty());
    s.world.ledger.mine_block();
    CHECK(s.world.ledger.is_mined(claim.txid));
}

TEST_CASE("fulfill: past the deadline Q may not start") {
    Setup s;
    auto a = s.ask("w", 10, 4);
    s.world.ledger.mine_until(a.offer.deadline);
    CHECK(code_of([&] { fulfill(s.world.ledger, s.world.q, a.offer); }) == Errc::parameter);
}

TEST_CASE("malicious Q: substitution and every strict subset are rejected") {
    Setup s;
    auto a = s.ask("x", 10, 8);
    s.world.ledger.mine_block();
    auto honest = s.honest(a.offer);
    REQUIRE(honest.ciphertexts.size() == 3);

    ReturnPayload swapped = honest;
    swapped.ciphertexts[1] = honest.ciphertexts[0];
    CHECK_FALSE(s.accepted(a.offer, swapped));
    auto claim = build_return(s.world.ledger, s.world.q, a.offer, swapped);
    CHECK(code_of([&] { submit_return(s.world.ledger, claim); }) == Errc::claim_rejected);

    for (unsigned mask = 0; mask < 7; ++mask) {
        ReturnPayload sub;
        for (unsigned i = 0; i < 3; ++i)
            if (mask & (1u << i)) sub.ciphertexts.push_back(honest.ciphertexts[i]);
        sub.h = honest.h;
        CHECK_FALSE(s.accepted(a.offer, sub));
        Bytes joined;
        for (const auto& c : sub.ciphertexts) append(joined, c);
        sub.h = crypto::keyed_hash(a.offer.query.k, joined);
        CHECK_FALSE(s.accepted(a.offer, sub));
    }
    CHECK(s.accepted(a.offer, honest));
    CHECK(s.world.ledger.utxo().contains(a.offer.deposit_outpoint()));
}

TEST_CASE("timeout: silent Q, early Fuse rejected, refund after t") {
    Setup s;
    auto a = s.ask("w", 10, 5);
    s.world.ledger.mine_block();
    try {
        refund_after_timeout(s.world.ledger, a.offer, a.fuse);
        FAIL("expected locktime_not_reached");
    } catch (const chain::TxRejected& e) {
        CHECK(e.reason() == chain::Reject::locktime_not_reached);
    }
    CHECK(s.world.ledger.validate(a.fuse.fuse_tx).reason == chain::Reject::locktime_not_reached);
    s.world.ledger.mine_until(a.offer.deadline);
    Txid f = refund_after_timeout(s.world.ledger, a.offer, a.fuse);
    s.world.ledger.mine_block();
    CHECK(s.world.ledger.is_mined(f));
    CHECK(s.world.uprime.balance(s.world.ledger) == 100);
    CHECK(*s.world.ledger.spender_of(a.offer.deposit_outpoint()) == f);
}

TEST_CASE("race: return and Fuse queued together, earlier submission wins") {
    for (bool return_first : {true, false}) {
        CAPTURE(return_first);
        Setup s;
        auto a = s.ask("w", 10, 5);
        s.world.ledger.mine_block();
        s.world.ledger.mine_until(a.offer.deadline);
        auto claim = build_return(s.world.ledger, s.world.q, a.offer, s.honest(a.offer));
        if (return_first) {
            submit_return(s.world.ledger, claim);
            refund_after_timeout(s.world.ledger, a.offer, a.fuse);
        } else {
            refund_after_timeout(s.world.ledger, a.offer, a.fuse);
            submit_return(s.world.ledger, claim);
        }
        s.world.ledger.mine_block();
        const bool r = s.world.ledger.is_mined(claim.txid);
        const bool f = s.world.ledger.is_mined(a.fuse.txid);
        CHECK(r != f);
        CHECK(r == return_first);
        CHECK(s.world.ledger.mempool().empty());
    }
}

TEST_CASE("oversized return travels in chunk carriers") {
    World world(chain::ChainConfig{160, 64, 256, 1}, 100);
    auto keys = testing::fixed_keys();
    std::vector<sse::Document> docs{{1, Bytes(300, 0x61), {"w"}}, {2, Bytes(90, 0x62), {"w"}}};
    crypto::DeterministicEntropy e(to_bytes("carriers"));
    auto pc = sse::publish_corpus(world.ledger, world.owner, keys, docs, Scheme::B, e);
    chain::ChainConfig cfg = world.ledger.config();
    CHECK(cfg.embed_limit == 160);
    auto a = make_ask(world.ledger, world.uprime, keys, "w", Scheme::B, pc.locator, 10, world.ledger.clock() + 20,
                      world.q.vk(), honest_cosigner(world.q.key()));
    world.ledger.mine_block();
    auto claim = fulfill(world.ledger, world.q, a.offer);
    CHECK_FALSE(claim.carriers.empty());
    world.ledger.mine_block();
    REQUIRE(world.ledger.is_mined(claim.txid));
    auto plain = sse::decrypt_results(keys, read_return(world.ledger, claim.txid).ciphertexts);
    CHECK(plain == std::vector<Bytes>{Bytes(300, 0x61), Bytes(90, 0x62)});
}

TEST_CASE("gate verifier survives a ledger reload once reinstalled") {
    Setup s;
    auto a = s.ask("w", 10, 6);
    s.world.ledger.mine_block();
    auto claim = build_return(s.world.ledger, s.world.q, a.offer, s.honest(a.offer));
    chain::Ledger back = chain::Ledger::load(s.world.ledger.dump());
    CHECK(back.validate(claim.return_tx).reason == chain::Reject::script_failed);
    install_verifiers(back);
    CHECK(back.validate(claim.return_tx).ok());
}
