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

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bcsse::workspace {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultFaucet = 1000;
constexpr const char* kParty[] = {"owner", "uprime", "q"};

std::uint64_t parse_number(std::string_view name, std::string_view value) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || p != value.data() + value.size())
        throw Error(Errc::parameter, std::string(name) + " must be a non-negative integer, got '" + std::string(value) + "'");
    return v;
}

Bytes read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot read " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Replaces `p` through a temporary file so readers never see a torn write.
void write_file(const fs::path& p, ByteView data, mode_t mode = 0644) {
    const fs::path tmp = p.string() + ".tmp";
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, mode);
    if (fd < 0) throw Error(Errc::io, "cannot write " + tmp.string());
    ::fchmod(fd, mode);
    std::size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::write(fd, data.data() + off, data.size() - off);
        if (n <= 0) {
            ::close(fd);
            throw Error(Errc::io, "short write to " + tmp.string());
        }
        off += static_cast<std::size_t>(n);
    }
    ::close(fd);
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw Error(Errc::io, "cannot replace " + p.string() + ": " + ec.message());
}

void write_text(const fs::path& p, const std::string& s, mode_t mode = 0644) {
    write_file(p, ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()), mode);
}

json read_json(const fs::path& p) {
    Bytes b = read_file(p);
    try {
        return json::parse(b.begin(), b.end());
    } catch (const json::exception& e) {
        throw Error(Errc::io, p.string() + " is not valid JSON: " + e.what());
    }
}

std::vector<std::string> words_of(ByteView text) {
    std::set<std::string> out;
    std::string cur;
    for (std::uint8_t c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.insert(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.insert(std::move(cur));
    return {out.begin(), out.end()};
}

Bytes be64(std::uint64_t v) {
    serial::Writer w;
    w.u64(v);
    return std::move(w).take();
}

std::string vk_hex(const crypto::VerifyKey& vk) { return to_hex(vk.bytes); }

crypto::VerifyKey vk_from_hex(const std::string& hex) {
    Bytes b = from_hex(hex);
    if (b.size() != crypto::kVerifyKeySize) throw Error(Errc::io, "stored verify key has the wrong length");
    crypto::VerifyKey vk;
    std::copy(b.begin(), b.end(), vk.bytes.begin());
    return vk;
}

chain::Transaction tx_from_hex(const std::string& hex) {
    Bytes b = from_hex(hex);
    serial::Reader r(b);
    auto tx = chain::deserialize_transaction(r);
    r.expect_done();
    return tx;
}

std::string_view kind_name(chain::PayloadKind k) {
    switch (k) {
        case chain::PayloadKind::raw: return "raw";
        case chain::PayloadKind::chunk: return "chunk";
        case chain::PayloadKind::split1: return "split1";
        case chain::PayloadKind::split2: return "split2";
        case chain::PayloadKind::split3: return "split3";
    }
    return "?";
}

}  // namespace

void Settings::set(std::string_view name, std::string_view value) {
    std::string n(name);
    std::replace(n.begin(), n.end(), '_', '-');
    if (n == "seed")
        seed = std::string(value);
    else if (n == "scheme")
        scheme = std::string(sse::scheme_name(sse::parse_scheme(value)));
    else if (n == "iota")
        iota = parse_number(name, value);
    else if (n == "p-bits")
        p_bits = parse_number(name, value);
    else if (n == "security-bits")
        security_bits = parse_number(name, value);
    else if (n == "max-delay")
        max_delay = parse_number(name, value);
    else if (n == "fee")
        fee = parse_number(name, value);
    else if (n == "faucet")
        faucet = parse_number(name, value);
    else
        throw Error(Errc::parameter, "unknown option '" + std::string(name) + "'");
}

Settings Settings::from_env() {
    Settings s;
    const std::pair<const char*, const char*> vars[] = {
        {"BCSSE_SEED", "seed"},         {"BCSSE_SCHEME", "scheme"},
        {"BCSSE_IOTA", "iota"},         {"BCSSE_P_BITS", "p-bits"},
        {"BCSSE_SECURITY_BITS", "security-bits"}, {"BCSSE_MAX_DELAY", "max-delay"},
        {"BCSSE_FEE", "fee"},           {"BCSSE_FAUCET", "faucet"},
    };
    for (const auto& [var, name] : vars)
        if (const char* v = std::getenv(var)) s.set(name, v);
    return s;
}

Settings Settings::merge(const Settings& base, const Settings& over) {
    Settings s = base;
    if (over.seed) s.seed = over.seed;
    if (over.scheme) s.scheme = over.scheme;
    if (over.iota) s.iota = over.iota;
    if (over.p_bits) s.p_bits = over.p_bits;
    if (over.security_bits) s.security_bits = over.security_bits;
    if (over.max_delay) s.max_delay = over.max_delay;
    if (over.fee) s.fee = over.fee;
    if (over.faucet) s.faucet = over.faucet;
    return s;
}

std::unique_ptr<Workspace> Workspace::open(const fs::path& dir, const Settings& flags) {
    std::unique_ptr<Workspace> ws(new Workspace());
    ws->dir_ = dir;
    std::error_code ec;
    fs::create_directories(dir / "transcript", ec);
    if (ec) throw Error(Errc::io, "cannot create workspace " + dir.string() + ": " + ec.message());

    ws->lock_fd_ = ::open((dir / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (ws->lock_fd_ < 0) throw Error(Errc::io, "cannot open lock file in " + dir.string());
    if (::flock(ws->lock_fd_, LOCK_EX | LOCK_NB) != 0)
        throw Error(Errc::locked, "workspace " + dir.string() + " is in use by another command");

    Settings file;
    const fs::path config = dir / "config.json";
    if (fs::exists(config)) {
        json j = read_json(config);
        for (auto& [k, v] : j.items()) file.set(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    const Settings explicit_settings = Settings::merge(Settings::from_env(), flags);
    ws->settings_ = Settings::merge(file, explicit_settings);

    chain::ChainConfig cfg;
    if (ws->settings_.iota) cfg.embed_limit = *ws->settings_.iota;
    if (ws->settings_.p_bits) cfg.txid_bits = static_cast<unsigned>(*ws->settings_.p_bits);
    if (ws->settings_.security_bits) cfg.security_bits = static_cast<unsigned>(*ws->settings_.security_bits);
    try {
        cfg.validate();
        crypto::check_security_param(cfg.security_bits);
    } catch (const Error& e) {
        throw Error(Errc::configuration, e.what());
    }

    const fs::path ledger = dir / "ledger.bin";
    if (fs::exists(ledger)) {
        ws->ledger_ = std::make_unique<chain::Ledger>(chain::Ledger::load(read_file(ledger)));
        const auto& have = ws->ledger_->config();
        auto clash = [&](const std::optional<std::uint64_t>& want, std::uint64_t actual, const char* what) {
            if (want && *want != actual)
                throw Error(Errc::configuration, std::string(what) + " " + std::to_string(*want) +
                                                     " contradicts the existing ledger (" + std::to_string(actual) +
                                                     ")");
        };
        clash(explicit_settings.iota, have.embed_limit, "iota");
        clash(explicit_settings.p_bits, have.txid_bits, "p-bits");
        clash(explicit_settings.security_bits, have.security_bits, "security-bits");
    } else {
        ws->ledger_ = std::make_unique<chain::Ledger>(cfg);
    }
    protocol::install_verifiers(*ws->ledger_);

    if (!fs::exists(config)) {
        json j;
        const auto& c = ws->ledger_->config();
        j["scheme"] = ws->settings_.scheme.value_or("B");
        j["iota"] = c.embed_limit;
        j["p_bits"] = c.txid_bits;
        j["security_bits"] = c.security_bits;
        j["max_delay"] = ws->settings_.max_delay.value_or(2);
        j["fee"] = ws->settings_.fee.value_or(0);
        j["faucet"] = ws->settings_.faucet.value_or(kDefaultFaucet);
        write_text(config, j.dump(2) + "\n");
    }
    ws->load();
    return ws;
}

Workspace::~Workspace() {
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

void Workspace::load() {
    keys_ = fs::exists(dir_ / "keys.json") ? read_json(dir_ / "keys.json") : json();
    owner_ = fs::exists(dir_ / "owner.json") ? read_json(dir_ / "owner.json") : json::object();
    offers_ = fs::exists(dir_ / "offers.json") ? read_json(dir_ / "offers.json") : json::array();
    const fs::path t = dir_ / "transcript" / "transcript.jsonl";
    if (fs::exists(t)) {
        Bytes b = read_file(t);
        seq_ = static_cast<std::uint64_t>(std::count(b.begin(), b.end(), '\n'));
    }
}

void Workspace::save_state() {
    write_file(dir_ / "ledger.bin", ledger_->dump());
    write_text(dir_ / "owner.json", owner_.dump(2) + "\n");
    write_text(dir_ / "offers.json", offers_.dump(2) + "\n");
}

void Workspace::require_keys() const {
    if (keys_.is_null()) throw Error(Errc::parameter, "no keys in this workspace; run keygen first");
}

Bytes Workspace::seed_bytes() const {
    require_keys();
    return from_hex(keys_.at("seed").get<std::string>());
}

crypto::KeyBundle Workspace::owner_keys() const {
    require_keys();
    return {from_hex(keys_.at("k1").get<std::string>()), from_hex(keys_.at("k2").get<std::string>())};
}

chain::Wallet Workspace::wallet(std::string_view party) const {
    return chain::Wallet(std::string(party), scenario::party_key(seed_bytes(), party));
}

std::string Workspace::command(const std::string& name, json args, const std::function<Outcome()>& fn) {
    std::map<std::string, std::uint64_t> before;
    if (!keys_.is_null())
        for (auto p : kParty) before[p] = wallet(p).balance(*ledger_);

    json rec;
    rec["seq"] = ++seq_;
    rec["command"] = name;
    rec["args"] = std::move(args);
    Outcome out;
    std::optional<Error> failure;
    try {
        out = fn();
        rec["ok"] = true;
    } catch (const Error& e) {
        failure = e;
        rec["ok"] = false;
        rec["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    }
    rec["clock"] = ledger_->clock();
    rec["txid"] = out.txid ? json(out.txid->hex()) : json(nullptr);
    rec["detail"] = out.detail;
    json deltas = json::object();
    if (!keys_.is_null())
        for (auto p : kParty) {
            auto now = static_cast<std::int64_t>(wallet(p).balance(*ledger_));
            auto was = static_cast<std::int64_t>(before.count(p) ? before[p] : 0);
            if (now != was) deltas[p] = now - was;
        }
    rec["deltas"] = deltas;

    save_state();
    std::ofstream t(dir_ / "transcript" / "transcript.jsonl", std::ios::app | std::ios::binary);
    t << rec.dump() << "\n";
    if (!t) throw Error(Errc::io, "cannot append to the transcript");
    if (failure) throw *failure;
    return out.text;
}

std::string Workspace::keygen() {
    return command("keygen", json::array(), [&] {
        if (!keys_.is_null()) throw Error(Errc::parameter, "keys already exist in this workspace");
        Bytes seed;
        if (settings_.seed) {
            seed = crypto::sha256(to_bytes(*settings_.seed));
        } else {
            crypto::SystemEntropy sys;
            seed = sys.take(32);
        }
        crypto::DeterministicEntropy entropy(scenario::owner_entropy_seed(seed));
        auto kb = crypto::gen(ledger_->config().security_bits, entropy);
        json k;
        k["seed"] = to_hex(seed);
        k["k1"] = to_hex(kb.k1);
        k["k2"] = to_hex(kb.k2);
        write_text(dir_ / "keys.json", k.dump(2) + "\n", 0600);
        keys_ = std::move(k);

        const std::uint64_t amount = settings_.faucet.value_or(kDefaultFaucet);
        Outcome out;
        std::ostringstream text;
        text << "generated " << ledger_->config().security_bits << "-bit owner keys"
             << (settings_.seed ? "" : " (random seed, not replayable)") << "\n";
        for (auto p : kParty) {
            auto w = wallet(p);
            ledger_->faucet(w.vk(), amount);
            out.detail[p] = vk_hex(w.vk());
            text << p << " " << vk_hex(w.vk()) << " funded " << amount << "\n";
        }
        ledger_->mine_block();
        out.text = text.str();
        return out;
    });
}

std::string Workspace::ingest(const fs::path& dir, const std::optional<fs::path>& manifest) {
    return command("ingest", json::array(), [&] {
        require_keys();
        if (!fs::is_directory(dir)) throw Error(Errc::io, dir.string() + " is not a directory");
        std::vector<std::pair<std::string, std::vector<std::string>>> picked;
        if (manifest) {
            std::ifstream in(*manifest);
            if (!in) throw Error(Errc::io, "cannot read manifest " + manifest->string());
            std::string line;
            std::size_t no = 0;
            while (std::getline(in, line)) {
                ++no;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty() || line[0] == '#') continue;
                auto tab = line.find('\t');
                if (tab == std::string::npos)
                    throw Error(Errc::parameter, "manifest line " + std::to_string(no) + " lacks a tab");
                std::vector<std::string> kws;
                std::string rest = line.substr(tab + 1);
                std::stringstream ss(rest);
                for (std::string kw; std::getline(ss, kw, ',');)
                    if (!kw.empty()) kws.push_back(kw);
                picked.emplace_back(line.substr(0, tab), std::move(kws));
            }
            std::sort(picked.begin(), picked.end());
        } else {
            std::vector<std::string> names;
            for (const auto& e : fs::directory_iterator(dir))
                if (e.is_regular_file() && e.path().filename().string()[0] != '.')
                    names.push_back(e.path().filename().string());
            std::sort(names.begin(), names.end());
            for (auto& n : names) picked.emplace_back(std::move(n), std::vector<std::string>{});
        }
        if (picked.empty()) throw Error(Errc::parameter, "no documents found in " + dir.string());

        json& docs = owner_["documents"];
        if (docs.is_null()) docs = json::array();
        std::uint64_t next = docs.size() + 1;
        std::set<std::string> all_keywords;
        for (auto& [name, kws] : picked) {
            Bytes text = read_file(dir / name);
            if (kws.empty()) kws = words_of(text);
            if (kws.empty()) throw Error(Errc::parameter, name + " has no keywords");
            all_keywords.insert(kws.begin(), kws.end());
            docs.push_back({{"doc_id", next++}, {"name", name}, {"keywords", kws}, {"plaintext", to_hex(text)}});
        }
        Outcome out;
        out.detail = {{"documents", picked.size()}, {"keywords", all_keywords.size()}};
        out.text = "ingested " + std::to_string(picked.size()) + " documents with " +
                   std::to_string(all_keywords.size()) + " distinct keywords\n";
        return out;
    });
}

std::string Workspace::index(const std::optional<std::string>& scheme_arg) {
    return command("index", json::array({scheme_arg.value_or("")}), [&] {
        require_keys();
        const sse::Scheme scheme = sse::parse_scheme(scheme_arg.value_or(settings_.scheme.value_or("B")));
        if (!owner_.contains("documents") || owner_["documents"].empty())
            throw Error(Errc::parameter, "no documents ingested");
        std::vector<sse::Document> docs;
        for (const auto& d : owner_["documents"]) {
            sse::Document doc;
            doc.doc_id = d.at("doc_id").get<std::uint64_t>();
            doc.plaintext = from_hex(d.at("plaintext").get<std::string>());
            for (const auto& kw : d.at("keywords")) doc.keywords.insert(kw.get<std::string>());
            docs.push_back(std::move(doc));
        }
        crypto::DeterministicEntropy entropy(
            crypto::sha256(concat({to_bytes("bcsse/enc/v1/"), seed_bytes(), be64(ledger_->height())})));
        sse::PublishOptions opts;
        opts.post.fee = settings_.fee.value_or(0);
        auto corpus = sse::publish_corpus(*ledger_, wallet("owner"), owner_keys(), docs, scheme, entropy, opts);

        json ids = json::object();
        for (const auto& [id, txid] : corpus.doc_txids) ids[std::to_string(id)] = txid.hex();
        owner_["index"] = {{"scheme", sse::scheme_name(scheme)}, {"locator", corpus.locator.hex()}, {"doc_txids", ids}};
        write_text(dir_ / "broadcast.txt", corpus.locator.hex() + " " + std::string(sse::scheme_name(scheme)) + "\n");

        Outcome out;
        out.txid = corpus.locator;
        out.detail = {{"scheme", sse::scheme_name(scheme)},
                      {"documents", docs.size()},
                      {"keywords", corpus.entries.size()},
                      {"delta", corpus.delta}};
        out.text = "scheme " + std::string(sse::scheme_name(scheme)) + " index " + corpus.locator.hex() + "\n" +
                   std::to_string(docs.size()) + " documents, " + std::to_string(corpus.entries.size()) +
                   " keywords, posting lists padded to " + std::to_string(corpus.delta) + "\n";
        return out;
    });
}

std::string Workspace::ask(const std::string& keyword, std::uint64_t deposit, const std::string& deadline) {
    return command("ask", json::array({keyword, deposit, deadline}), [&] {
        require_keys();
        const fs::path b = dir_ / "broadcast.txt";
        if (!fs::exists(b)) throw Error(Errc::parameter, "no index has been broadcast; run index first");
        std::istringstream in(to_string(read_file(b)));
        std::string locator_hex, scheme_name;
        if (!(in >> locator_hex >> scheme_name)) throw Error(Errc::io, "broadcast.txt is malformed");
        const sse::Scheme scheme = sse::parse_scheme(scheme_name);

        const bool relative = !deadline.empty() && deadline[0] == '+';
        std::uint64_t t = parse_number("deadline", relative ? std::string_view(deadline).substr(1) : deadline);
        if (relative) t += ledger_->clock();

        protocol::AskOptions opts{settings_.max_delay.value_or(2), settings_.fee.value_or(0)};
        auto q = wallet("q");
        auto signed_ask = protocol::make_ask(*ledger_, wallet("uprime"), owner_keys(), keyword, scheme,
                                             chain::Txid::from_hex(locator_hex), deposit, t, q.vk(),
                                             protocol::honest_cosigner(q.key()), opts);
        const auto& o = signed_ask.offer;
        const std::string id = "offer-" + std::to_string(offers_.size() + 1);
        offers_.push_back({{"id", id},
                           {"keyword", keyword},
                           {"ask_tx", to_hex(chain::serialize(o.ask_tx))},
                           {"fuse_tx", to_hex(chain::serialize(signed_ask.fuse.fuse_tx))},
                           {"funding", {{"txid", o.funding.txid.hex()}, {"index", o.funding.index}}},
                           {"query", to_hex(protocol::serialize_query(o.query))},
                           {"deposit", o.deposit},
                           {"deadline", o.deadline},
                           {"max_delay", o.max_delay},
                           {"fee", o.fee},
                           {"owner", vk_hex(o.owner)},
                           {"searcher", vk_hex(o.searcher)}});
        Outcome out;
        out.txid = o.ask_txid;
        out.detail = {{"offer", id}, {"deposit", deposit}, {"deadline", t}, {"fuse", signed_ask.fuse.txid.hex()}};
        out.text = id + " ask " + o.ask_txid.hex() + " deposit " + std::to_string(deposit) + " deadline " +
                   std::to_string(t) + "\nFuse " + signed_ask.fuse.txid.hex() + " signed by both parties, held\n";
        return out;
    });
}

const json& Workspace::offer_json(const std::string& id) const {
    for (const auto& o : offers_)
        if (o.at("id").get<std::string>() == id) return o;
    throw Error(Errc::not_found, "no " + id + " in this workspace");
}

protocol::AskOffer Workspace::load_offer(const json& j) const {
    protocol::AskOffer o;
    o.ask_tx = tx_from_hex(j.at("ask_tx").get<std::string>());
    o.ask_txid = ledger_->id_of(o.ask_tx);
    o.funding = {chain::Txid::from_hex(j.at("funding").at("txid").get<std::string>()),
                 j.at("funding").at("index").get<std::uint32_t>()};
    o.query = protocol::parse_query(from_hex(j.at("query").get<std::string>()));
    o.deposit = j.at("deposit").get<std::uint64_t>();
    o.deadline = j.at("deadline").get<std::uint64_t>();
    o.max_delay = j.at("max_delay").get<std::uint64_t>();
    o.fee = j.at("fee").get<std::uint64_t>();
    o.owner = vk_from_hex(j.at("owner").get<std::string>());
    o.searcher = vk_from_hex(j.at("searcher").get<std::string>());
    return o;
}

protocol::FuseRefund Workspace::load_fuse(const json& j) const {
    protocol::FuseRefund f;
    f.fuse_tx = tx_from_hex(j.at("fuse_tx").get<std::string>());
    f.txid = ledger_->id_of(f.fuse_tx);
    return f;
}

std::string Workspace::fulfill(const std::string& offer) {
    return command("fulfill", json::array({offer}), [&] {
        require_keys();
        auto o = load_offer(offer_json(offer));
        auto claim = protocol::fulfill(*ledger_, wallet("q"), o, {settings_.fee.value_or(0), {}});
        Outcome out;
        out.txid = claim.txid;
        out.detail = {{"documents", claim.payload.ciphertexts.size()}, {"carriers", claim.carriers.size()}};
        out.text = "return " + claim.txid.hex() + " submitted with " +
                   std::to_string(claim.payload.ciphertexts.size()) + " documents\n";
        return out;
    });
}

std::string Workspace::refund(const std::string& offer) {
    return command("refund", json::array({offer}), [&] {
        const json& j = offer_json(offer);
        auto id = protocol::refund_after_timeout(*ledger_, load_offer(j), load_fuse(j));
        Outcome out;
        out.txid = id;
        out.text = "Fuse " + id.hex() + " submitted\n";
        return out;
    });
}

std::string Workspace::abort(const std::string& offer) {
    return command("abort", json::array({offer}), [&] {
        require_keys();
        auto id = protocol::abort_before_inclusion(*ledger_, wallet("uprime"), load_offer(offer_json(offer)));
        Outcome out;
        out.txid = id;
        out.text = "abort " + id.hex() + " redeems the funding coin\n";
        return out;
    });
}

std::string Workspace::mine(std::uint64_t blocks) {
    return command("mine", json::array({blocks}), [&] {
        Outcome out;
        std::ostringstream text;
        std::uint64_t included = 0, evicted = 0;
        for (std::uint64_t i = 0; i < blocks; ++i) {
            auto s = ledger_->mine_block();
            included += s.included.size();
            evicted += s.evicted.size();
            text << "block " << s.height << " clock " << s.clock_after << " included " << s.included.size();
            for (const auto& [id, why] : s.evicted) text << " evicted " << id.hex() << " (" << reject_name(why) << ")";
            text << "\n";
        }
        out.detail = {{"blocks", blocks}, {"included", included}, {"evicted", evicted}};
        out.text = text.str();
        return out;
    });
}

std::string Workspace::inspect(const std::optional<std::string>& txid) {
    struct Label {
        std::string type;
        std::optional<chain::Txid> link;
    };
    std::map<chain::Txid, Label> labels;
    const std::size_t p = ledger_->config().txid_bytes();

    auto tail_link = [&](const chain::Payload& pl) -> std::optional<chain::Txid> {
        if (pl.kind == chain::PayloadKind::raw || pl.data.size() < p) return std::nullopt;
        return chain::Txid(Bytes(pl.data.end() - static_cast<std::ptrdiff_t>(p), pl.data.end()));
    };
    auto label_chunks = [&](const chain::Txid& head, const std::string& type) {
        std::optional<chain::Txid> at = head;
        for (std::uint64_t guard = 0; at && !at->is_zero() && guard <= ledger_->height(); ++guard) {
            const auto* tx = ledger_->find(*at);
            if (!tx || !tx->payload() || tx->payload()->kind != chain::PayloadKind::chunk) break;
            auto link = tail_link(*tx->payload());
            labels[*at] = {type + "-chunk", link};
            at = link;
        }
    };

    if (owner_.contains("index") && !keys_.is_null()) {
        const auto& idx = owner_["index"];
        for (auto& [id, hex] : idx.at("doc_txids").items()) {
            auto t = chain::Txid::from_hex(hex.get<std::string>());
            const auto* tx = ledger_->find(t);
            if (tx && tx->payload() && tx->payload()->kind == chain::PayloadKind::chunk)
                label_chunks(t, "document");
            else
                labels[t] = {"document", std::nullopt};
        }
        auto locator = chain::Txid::from_hex(idx.at("locator").get<std::string>());
        if (idx.at("scheme").get<std::string>() == "A") {
            labels[locator] = {"index-array", std::nullopt};
        } else {
            const Bytes k11 = sse::chain_key(owner_keys(), p);
            const std::size_t token = owner_keys().k2.size();
            chain::Txid at = locator;
            for (std::uint64_t guard = 0; !at.is_zero() && guard <= ledger_->height(); ++guard) {
                try {
                    auto rec = sse::read_index_record(*ledger_, at, k11, token);
                    labels[at] = {"index-record", rec.prev};
                    at = rec.prev;
                } catch (const Error&) {
                    break;
                }
            }
        }
    }
    for (const auto& j : offers_) {
        auto o = load_offer(j);
        auto f = load_fuse(j);
        labels[o.ask_txid] = {"ask", std::nullopt};
        labels[f.txid] = {"fuse", std::nullopt};
        if (auto spender = ledger_->spender_of(o.deposit_outpoint()); spender && *spender != f.txid) {
            const auto* tx = ledger_->find(*spender);
            if (tx && tx->payload() && tx->payload()->kind == chain::PayloadKind::chunk) {
                label_chunks(*spender, "return");
                labels[*spender].type = "return";
            } else {
                labels[*spender] = {"return", std::nullopt};
            }
        }
    }

    auto describe = [&](const chain::Txid& id, const chain::Transaction& tx, const std::string& where) {
        std::string type;
        std::optional<chain::Txid> link;
        if (auto it = labels.find(id); it != labels.end()) {
            type = it->second.type;
            link = it->second.link;
        } else if (tx.is_coinbase()) {
            type = "coinbase";
        } else if (tx.payload()) {
            type = "payload";
        } else {
            type = "transfer";
        }
        if (!link && tx.payload() && tx.payload()->kind != chain::PayloadKind::raw) link = tail_link(*tx.payload());
        std::uint64_t value = 0;
        for (const auto& o : tx.outputs) value += o.value;
        std::ostringstream line;
        line << id.hex() << " " << where << " type=" << type << " inputs=" << tx.inputs.size()
             << " outputs=" << tx.outputs.size() << " value=" << value;
        if (tx.locktime) line << " locktime=" << tx.locktime;
        if (const auto* pl = tx.payload())
            line << " payload=" << kind_name(pl->kind) << ":" << pl->data.size();
        else
            line << " payload=none";
        line << " link=" << (link ? (link->is_zero() ? std::string("0") : link->hex()) : std::string("-")) << "\n";
        return line.str();
    };

    std::string out;
    if (txid) {
        auto id = chain::Txid::from_hex(*txid);
        if (const auto* tx = ledger_->find(id))
            return describe(id, *tx, "block=" + std::to_string(*ledger_->block_of(id)));
        for (const auto& [mid, tx] : ledger_->mempool())
            if (mid == id) return describe(id, tx, "pending");
        throw Error(Errc::not_found, "no transaction " + *txid);
    }
    for (const auto& b : ledger_->blocks())
        for (std::size_t i = 0; i < b.txs.size(); ++i) out += describe(b.ids[i], b.txs[i], "block=" + std::to_string(b.height));
    for (const auto& [id, tx] : ledger_->mempool()) out += describe(id, tx, "pending");
    return out;
}

std::string Workspace::decrypt(const std::string& offer) {
    return command("decrypt", json::array({offer}), [&] {
        require_keys();
        const json& j = offer_json(offer);
        auto o = load_offer(j);
        auto f = load_fuse(j);
        auto spender = ledger_->spender_of(o.deposit_outpoint());
        if (!spender) throw Error(Errc::not_found, "no mined return for " + offer);
        if (*spender == f.txid) throw Error(Errc::not_found, offer + " was refunded through the Fuse");
        auto ret = protocol::read_return(*ledger_, *spender);
        auto plain = sse::decrypt_results(owner_keys(), ret.ciphertexts);

        std::map<Bytes, std::string> names;
        if (owner_.contains("index"))
            for (const auto& d : owner_["documents"]) {
                const auto& ids = owner_["index"].at("doc_txids");
                auto key = std::to_string(d.at("doc_id").get<std::uint64_t>());
                if (!ids.contains(key)) continue;
                auto c = sse::resolve_document(*ledger_, chain::Txid::from_hex(ids.at(key).get<std::string>()));
                names[std::move(c)] = d.at("name").get<std::string>();
            }

        Outcome out;
        out.txid = *spender;
        out.detail = {{"documents", plain.size()}};
        std::ostringstream text;
        text << plain.size() << " matching documents for '" << j.at("keyword").get<std::string>() << "'\n";
        for (std::size_t i = 0; i < plain.size(); ++i) {
            std::string name;
            if (auto it = names.find(ret.ciphertexts[i]); it != names.end()) name = " " + it->second;
            text << "--- document " << (i + 1) << name << " (" << plain[i].size() << " bytes)\n"
                 << to_string(plain[i]) << "\n";
        }
        out.text = text.str();
        return out;
    });
}

std::string Workspace::scenario(const std::string& script) {
    scenario::Config cfg;
    cfg.chain = ledger_->config();
    if (!keys_.is_null())
        cfg.seed = seed_bytes();
    else if (settings_.seed)
        cfg.seed = crypto::sha256(to_bytes(*settings_.seed));
    else
        throw Error(Errc::configuration, "scenario needs a seed; pass --seed or run keygen first");
    cfg.fee = settings_.fee.value_or(0);
    cfg.max_delay = settings_.max_delay.value_or(2);
    scenario::Scenario s(cfg);
    s.run(script);
    std::string text = s.transcript_text();
    write_text(dir_ / "transcript" / "scenario.jsonl", text);
    return text;
}

}  // namespace bcsse::workspace
