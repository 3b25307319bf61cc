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

// bcsse: command-line front end over the libbcsse C API.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bcsse/bcsse.h"

namespace {

struct Flags {
    std::string workspace = "bcsse-workspace";
    std::vector<std::string> options;
};

int report(bcsse_status st, char* out, const std::string& to_file = {}) {
    if (st != BCSSE_OK) {
        std::fprintf(stderr, "bcsse: %s: %s\n", bcsse_status_str(st), bcsse_last_error());
        return static_cast<int>(st);
    }
    if (out) {
        if (to_file.empty()) {
            std::fputs(out, stdout);
        } else {
            std::ofstream f(to_file, std::ios::binary);
            f << out;
            if (!f) {
                std::fprintf(stderr, "bcsse: cannot write %s\n", to_file.c_str());
                bcsse_free(out);
                return static_cast<int>(BCSSE_E_IO);
            }
        }
        bcsse_free(out);
    }
    return 0;
}

/// Opens the workspace, runs `fn` against it and closes it again.
template <class Fn>
int with_workspace(const Flags& flags, Fn&& fn) {
    std::vector<const char*> opts;
    for (const auto& o : flags.options) opts.push_back(o.c_str());
    bcsse_workspace* ws = nullptr;
    bcsse_status st = bcsse_workspace_open(flags.workspace.c_str(), opts.data(), opts.size(), &ws);
    if (st != BCSSE_OK) return report(st, nullptr);
    char* out = nullptr;
    st = fn(ws, &out);
    int rc = report(st, out);
    bcsse_workspace_close(ws);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Searchable encryption over a simulated UTXO ledger"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bcsse_version()));

    Flags flags;
    std::string seed, scheme;
    std::uint64_t iota = 0, p_bits = 0, security_bits = 0, max_delay = 0, fee = 0, faucet = 0;
    app.add_option("--workspace,-w", flags.workspace, "Workspace directory")->envname("BCSSE_WORKSPACE");
    auto* o_seed = app.add_option("--seed", seed, "Deterministic seed for keys and encryption");
    auto* o_scheme = app.add_option("--scheme", scheme, "Index scheme")->check(CLI::IsMember({"A", "B", "a", "b"}));
    auto* o_iota = app.add_option("--iota", iota, "Embedded payload limit in bytes");
    auto* o_p = app.add_option("--p-bits", p_bits, "Transaction id length in bits");
    auto* o_k = app.add_option("--security-bits", security_bits, "Key length in bits (128 or 256)");
    auto* o_delay = app.add_option("--max-delay", max_delay, "Ticks before the deadline at which an ask may be aborted");
    auto* o_fee = app.add_option("--fee", fee, "Flat fee per transaction");
    auto* o_faucet = app.add_option("--faucet", faucet, "Coins granted to each party by keygen");

    app.add_subcommand("keygen", "Generate owner keys and fund the parties");

    auto* ingest = app.add_subcommand("ingest", "Read a directory of plaintext documents");
    std::string ingest_dir, manifest;
    ingest->add_option("dir", ingest_dir, "Document directory")->required();
    ingest->add_option("--manifest", manifest, "FILE<TAB>KW,KW lines");

    auto* index = app.add_subcommand("index", "Encrypt the documents and publish the index");
    std::string index_scheme;
    index->add_option("scheme", index_scheme, "A or B")->check(CLI::IsMember({"A", "B", "a", "b"}));

    auto* ask = app.add_subcommand("ask", "Post a paid search request");
    std::string keyword, deadline;
    std::uint64_t deposit = 0;
    ask->add_option("keyword", keyword)->required();
    ask->add_option("deposit", deposit)->required();
    ask->add_option("--deadline,-t", deadline, "Absolute clock value or +D")->required();

    std::string offer;
    auto* fulfill = app.add_subcommand("fulfill", "Search for an offer and claim its deposit");
    fulfill->add_option("offer", offer)->required();
    auto* refund = app.add_subcommand("refund", "Broadcast the Fuse of an expired offer");
    refund->add_option("offer", offer)->required();
    auto* abort_cmd = app.add_subcommand("abort", "Redeem the funding coin of an unmined ask");
    abort_cmd->add_option("offer", offer)->required();
    auto* decrypt = app.add_subcommand("decrypt", "Decrypt the documents returned for an offer");
    decrypt->add_option("offer", offer)->required();

    auto* mine = app.add_subcommand("mine", "Mine blocks");
    std::uint64_t blocks = 1;
    mine->add_option("blocks", blocks);

    auto* inspect = app.add_subcommand("inspect", "Describe ledger transactions");
    std::string txid;
    inspect->add_option("txid", txid);

    auto* bench = app.add_subcommand("bench", "Index build and search scaling table");
    std::string pairs = "100,200,400,800", bench_out;
    bench->add_option("--pairs", pairs, "Comma-separated pair counts");
    bench->add_option("--out,-o", bench_out, "Write the table to a file");

    auto* scenario = app.add_subcommand("scenario", "Run a party script on a fresh ledger");
    std::string script_path;
    scenario->add_option("script", script_path)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    auto flag = [&](CLI::Option* opt, const char* name, const std::string& value) {
        if (opt->count()) flags.options.push_back(std::string(name) + "=" + value);
    };
    flag(o_seed, "seed", seed);
    flag(o_scheme, "scheme", scheme);
    flag(o_iota, "iota", std::to_string(iota));
    flag(o_p, "p-bits", std::to_string(p_bits));
    flag(o_k, "security-bits", std::to_string(security_bits));
    flag(o_delay, "max-delay", std::to_string(max_delay));
    flag(o_fee, "fee", std::to_string(fee));
    flag(o_faucet, "faucet", std::to_string(faucet));

    if (app.got_subcommand("bench")) {
        char* out = nullptr;
        const bcsse_status st = bcsse_bench(pairs.c_str(), &out);
        return report(st, out, bench_out);
    }
    if (app.got_subcommand("keygen"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) { return bcsse_keygen(ws, out); });
    if (app.got_subcommand("ingest"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) {
            return bcsse_ingest(ws, ingest_dir.c_str(), manifest.empty() ? nullptr : manifest.c_str(), out);
        });
    if (app.got_subcommand("index"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) {
            return bcsse_index(ws, index_scheme.empty() ? nullptr : index_scheme.c_str(), out);
        });
    if (app.got_subcommand("ask"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) {
            return bcsse_ask(ws, keyword.c_str(), deposit, deadline.c_str(), out);
        });
    if (app.got_subcommand("fulfill"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) { return bcsse_fulfill(ws, offer.c_str(), out); });
    if (app.got_subcommand("refund"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) { return bcsse_refund(ws, offer.c_str(), out); });
    if (app.got_subcommand("abort"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) { return bcsse_abort(ws, offer.c_str(), out); });
    if (app.got_subcommand("decrypt"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) { return bcsse_decrypt(ws, offer.c_str(), out); });
    if (app.got_subcommand("mine"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) { return bcsse_mine(ws, blocks, out); });
    if (app.got_subcommand("inspect"))
        return with_workspace(flags, [&](bcsse_workspace* ws, char** out) {
            return bcsse_inspect(ws, txid.empty() ? nullptr : txid.c_str(), out);
        });
    if (app.got_subcommand("scenario")) {
        std::ifstream in(script_path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string script = ss.str();
        return with_workspace(flags,
                              [&](bcsse_workspace* ws, char** out) { return bcsse_run_scenario(ws, script.c_str(), out); });
    }
    return 0;
}
