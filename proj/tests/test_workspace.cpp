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

#include "bcsse/workspace.hpp"
#include "support.hpp"

#include <sys/stat.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace bcsse;
using namespace bcsse::workspace;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("bcsse-test-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    f << s;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path make_docs(const fs::path& root) {
    fs::path docs = root / "docs";
    fs::create_directories(docs);
    write(docs / "d1.txt", "ab w");
    write(docs / "d2.txt", "cd");
    write(docs / "d3.txt", "w ef");
    return docs;
}

Settings flags(const std::string& seed, const std::string& scheme = "B") {
    Settings s;
    s.set("seed", seed);
    s.set("scheme", scheme);
    s.set("iota", "4096");
    return s;
}

/// keygen, ingest, index, ask, mine, fulfill, mine, decrypt.
std::string run_flow(const fs::path& dir, const fs::path& docs, const std::string& scheme) {
    auto ws = Workspace::open(dir, flags("flow-seed", scheme));
    ws->keygen();
    ws->ingest(docs, std::nullopt);
    ws->index(std::nullopt);
    ws->ask("w", 10, "+6");
    ws->mine(1);
    ws->fulfill("offer-1");
    ws->mine(1);
    return ws->decrypt("offer-1");
}

}  // namespace

TEST_CASE("workspace: end to end flow decrypts the two matching documents") {
    for (const char* scheme : {"A", "B"}) {
        TempDir t(std::string("flow") + scheme);
        auto docs = make_docs(t.path);
        std::string out = run_flow(t.path / "ws", docs, scheme);
        CHECK(out.find("2 matching documents for 'w'") != std::string::npos);
        CHECK(out.find("d1.txt") != std::string::npos);
        CHECK(out.find("d3.txt") != std::string::npos);
        CHECK(out.find("ab w") != std::string::npos);
        CHECK(out.find("w ef") != std::string::npos);
        CHECK(out.find("d2.txt") == std::string::npos);

        struct stat st {};
        REQUIRE(::stat((t.path / "ws" / "keys.json").c_str(), &st) == 0);
        CHECK((st.st_mode & 0777) == 0600);
    }
}

TEST_CASE("workspace: replay from a fresh directory is byte-identical") {
    TempDir t("replay");
    auto docs = make_docs(t.path);
    run_flow(t.path / "one", docs, "B");
    run_flow(t.path / "two", docs, "B");
    for (const char* f : {"ledger.bin", "transcript/transcript.jsonl", "offers.json", "broadcast.txt"})
        CHECK_MESSAGE(slurp(t.path / "one" / f) == slurp(t.path / "two" / f), f);
}

TEST_CASE("workspace: inspect shows structure, never plaintext or tokens") {
    TempDir t("inspect");
    auto docs = make_docs(t.path);
    run_flow(t.path / "ws", docs, "B");
    auto ws = Workspace::open(t.path / "ws", {});
    std::string all = ws->inspect(std::nullopt);
    for (const char* type : {"type=coinbase", "type=document", "type=index-record", "type=ask", "type=return"})
        CHECK_MESSAGE(all.find(type) != std::string::npos, type);
    CHECK(all.find("ab w") == std::string::npos);
    CHECK(all.find("w ef") == std::string::npos);

    auto keys = nlohmann::json::parse(slurp(t.path / "ws" / "keys.json"));
    crypto::KeyBundle kb{from_hex(keys["k1"].get<std::string>()), from_hex(keys["k2"].get<std::string>())};
    auto tk = sse::derive_tokens(kb, "w");
    const std::string transcript = slurp(t.path / "ws" / "transcript" / "transcript.jsonl");
    const std::string ledger = slurp(t.path / "ws" / "ledger.bin");
    for (const Bytes& secret : {kb.k1, kb.k2, tk.t, tk.l, tk.k}) {
        CHECK(all.find(to_hex(secret)) == std::string::npos);
        CHECK(transcript.find(to_hex(secret)) == std::string::npos);
    }
    CHECK_FALSE(contains_subsequence(to_bytes(ledger), kb.k1));
    CHECK_FALSE(contains_subsequence(to_bytes(ledger), kb.k2));
    CHECK_FALSE(contains_subsequence(to_bytes(ledger), to_bytes("ab w")));

    // Single index record: type and link, nothing else.
    std::string head;
    std::istringstream(slurp(t.path / "ws" / "broadcast.txt")) >> head;
    std::string one = ws->inspect(head);
    CHECK(one.find("type=index-record") != std::string::npos);
    CHECK(one.find("link=") != std::string::npos);
    CHECK(one.find(to_hex(tk.t)) == std::string::npos);
}

TEST_CASE("workspace: one command at a time") {
    TempDir t("lock");
    auto first = Workspace::open(t.path / "ws", flags("lock"));
    try {
        Workspace::open(t.path / "ws", {});
        FAIL("expected locked");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::locked);
    }
    first.reset();
    CHECK_NOTHROW(Workspace::open(t.path / "ws", {}));
}

TEST_CASE("workspace: flag beats environment beats config file") {
    TempDir t("precedence");
    {
        Settings s;
        s.set("fee", "3");
        s.set("iota", "4096");
        Workspace::open(t.path / "ws", s)->mine(1);
    }
    auto cfg = nlohmann::json::parse(slurp(t.path / "ws" / "config.json"));
    CHECK(cfg["fee"] == 3);

    Settings file, env, flag;
    file.set("fee", "1");
    file.set("max_delay", "5");
    env.set("fee", "2");
    env.set("max-delay", "6");
    flag.set("fee", "3");
    auto merged = Settings::merge(Settings::merge(file, env), flag);
    CHECK(*merged.fee == 3);
    CHECK(*merged.max_delay == 6);

    ::setenv("BCSSE_FEE", "7", 1);
    auto from_env = Settings::from_env();
    ::unsetenv("BCSSE_FEE");
    CHECK(*from_env.fee == 7);
    CHECK_THROWS_AS(flag.set("colour", "red"), Error);
    CHECK_THROWS_AS(flag.set("iota", "lots"), Error);

    Settings clash;
    clash.set("iota", "80");
    try {
        Workspace::open(t.path / "ws", clash);
        FAIL("expected configuration error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::configuration);
    }
}

TEST_CASE("workspace: failed commands are recorded and keep state") {
    TempDir t("errors");
    auto ws = Workspace::open(t.path / "ws", flags("errors"));
    CHECK_THROWS_AS(ws->index(std::nullopt), Error);
    ws->keygen();
    CHECK_THROWS_AS(ws->keygen(), Error);
    CHECK_THROWS_AS(ws->fulfill("offer-4"), Error);
    const std::string transcript = slurp(t.path / "ws" / "transcript" / "transcript.jsonl");
    std::size_t lines = 0, failures = 0;
    std::istringstream in(transcript);
    for (std::string line; std::getline(in, line); ++lines)
        if (!nlohmann::json::parse(line)["ok"].get<bool>()) ++failures;
    CHECK(lines == 4);
    CHECK(failures == 3);
}

TEST_CASE("workspace: scenario runs on a fresh ledger and writes its transcript") {
    TempDir t("scenario");
    auto ws = Workspace::open(t.path / "ws", flags("scn"));
    std::string out = ws->scenario("world fund owner 5\nowner doc 1 w hello\nowner index B\n");
    CHECK(std::count(out.begin(), out.end(), '\n') == 3);
    CHECK(slurp(t.path / "ws" / "transcript" / "scenario.jsonl") == out);
    CHECK(ws->ledger().height() == 0);
}

TEST_CASE("bench: table shape and hop counts") {
    BenchOptions opts;
    opts.pair_counts = {40, 80};
    auto rows = run_bench(opts);
    CHECK(rows.size() == 4 + 8);
    for (const auto& r : rows) {
        CHECK(r.keywords == r.pairs / 10);
        CHECK(r.documents == r.pairs / 4);
        CHECK(r.hops == r.keywords - r.keyword_pos + 1);
    }
    std::string tsv = bench_tsv(rows);
    CHECK(tsv.rfind("pairs\tkeywords\tdocuments\tindex_ops\tindex_ms\tkeyword_pos\thops\ttx_reads\tsearch_ms\n", 0) == 0);
    opts.pair_counts = {30};
    CHECK_THROWS_AS(run_bench(opts), Error);
}
