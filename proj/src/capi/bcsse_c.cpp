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

#include "bcsse/bcsse.h"

#include "bcsse/workspace.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

struct bcsse_workspace {
    std::unique_ptr<bcsse::workspace::Workspace> impl;
};

namespace {

thread_local std::string g_last_error;

bcsse_status to_status(bcsse::Errc c) {
    using bcsse::Errc;
    switch (c) {
        case Errc::parameter: return BCSSE_E_PARAM;
        case Errc::authentication: return BCSSE_E_AUTH;
        case Errc::payload_too_large: return BCSSE_E_PAYLOAD_TOO_LARGE;
        case Errc::not_found: return BCSSE_E_NOT_FOUND;
        case Errc::corrupt_chain: return BCSSE_E_CORRUPT_CHAIN;
        case Errc::integrity: return BCSSE_E_INTEGRITY;
        case Errc::funding: return BCSSE_E_FUNDING;
        case Errc::store_timeout: return BCSSE_E_TIMEOUT;
        case Errc::cannot_abort: return BCSSE_E_CANNOT_ABORT;
        case Errc::configuration: return BCSSE_E_CONFIG;
        case Errc::claim_rejected: return BCSSE_E_CLAIM_REJECTED;
        case Errc::rejected: return BCSSE_E_REJECTED;
        case Errc::validation: return BCSSE_E_VALIDATION;
        case Errc::io: return BCSSE_E_IO;
        case Errc::locked: return BCSSE_E_LOCKED;
        case Errc::aborted: return BCSSE_E_ABORTED;
    }
    return BCSSE_E_INTERNAL;
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.data(), s.size());
    p[s.size()] = '\0';
    return p;
}

/// Runs `fn`, stores its text in *out and maps exceptions onto statuses.
template <class Fn>
bcsse_status guard(char** out, Fn&& fn) {
    if (out) *out = nullptr;
    g_last_error.clear();
    try {
        std::string text = fn();
        if (out) *out = dup(text);
        return BCSSE_OK;
    } catch (const bcsse::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BCSSE_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return BCSSE_E_INTERNAL;
    }
}

bcsse::workspace::Workspace& need(bcsse_workspace* ws) {
    if (!ws || !ws->impl) throw bcsse::Error(bcsse::Errc::parameter, "workspace handle is NULL");
    return *ws->impl;
}

std::string need_str(const char* s, const char* what) {
    if (!s) throw bcsse::Error(bcsse::Errc::parameter, std::string(what) + " is NULL");
    return s;
}

}  // namespace

extern "C" {

const char* bcsse_version(void) { return "1.0.0"; }

const char* bcsse_status_str(bcsse_status status) {
    switch (status) {
        case BCSSE_OK: return "ok";
        case BCSSE_E_PARAM: return "parameter error";
        case BCSSE_E_AUTH: return "authentication failure";
        case BCSSE_E_PAYLOAD_TOO_LARGE: return "payload too large";
        case BCSSE_E_NOT_FOUND: return "not found";
        case BCSSE_E_CORRUPT_CHAIN: return "corrupt chain";
        case BCSSE_E_INTEGRITY: return "integrity failure";
        case BCSSE_E_FUNDING: return "insufficient funds";
        case BCSSE_E_TIMEOUT: return "store timeout";
        case BCSSE_E_CANNOT_ABORT: return "cannot abort";
        case BCSSE_E_CONFIG: return "configuration error";
        case BCSSE_E_CLAIM_REJECTED: return "claim rejected";
        case BCSSE_E_REJECTED: return "transaction rejected";
        case BCSSE_E_VALIDATION: return "validation error";
        case BCSSE_E_IO: return "i/o error";
        case BCSSE_E_LOCKED: return "workspace locked";
        case BCSSE_E_ABORTED: return "aborted";
        case BCSSE_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* bcsse_last_error(void) { return g_last_error.c_str(); }

void bcsse_free(char* text) { std::free(text); }

bcsse_status bcsse_workspace_open(const char* path, const char* const* options, size_t n_options,
                                  bcsse_workspace** out) {
    if (out) *out = nullptr;
    return guard(nullptr, [&] {
        if (!out) throw bcsse::Error(bcsse::Errc::parameter, "out handle is NULL");
        bcsse::workspace::Settings flags;
        for (size_t i = 0; i < n_options; ++i) {
            std::string opt = need_str(options ? options[i] : nullptr, "option");
            auto eq = opt.find('=');
            if (eq == std::string::npos)
                throw bcsse::Error(bcsse::Errc::parameter, "option '" + opt + "' is not name=value");
            flags.set(opt.substr(0, eq), opt.substr(eq + 1));
        }
        auto ws = std::make_unique<bcsse_workspace>();
        ws->impl = bcsse::workspace::Workspace::open(need_str(path, "path"), flags);
        *out = ws.release();
        return std::string();
    });
}

void bcsse_workspace_close(bcsse_workspace* ws) { delete ws; }

bcsse_status bcsse_keygen(bcsse_workspace* ws, char** out) {
    return guard(out, [&] { return need(ws).keygen(); });
}

bcsse_status bcsse_ingest(bcsse_workspace* ws, const char* dir, const char* manifest, char** out) {
    return guard(out, [&] {
        std::optional<std::filesystem::path> m;
        if (manifest) m = manifest;
        return need(ws).ingest(need_str(dir, "dir"), m);
    });
}

bcsse_status bcsse_index(bcsse_workspace* ws, const char* scheme, char** out) {
    return guard(out, [&] {
        std::optional<std::string> s;
        if (scheme) s = scheme;
        return need(ws).index(s);
    });
}

bcsse_status bcsse_ask(bcsse_workspace* ws, const char* keyword, uint64_t deposit, const char* deadline, char** out) {
    return guard(out, [&] { return need(ws).ask(need_str(keyword, "keyword"), deposit, need_str(deadline, "deadline")); });
}

bcsse_status bcsse_fulfill(bcsse_workspace* ws, const char* offer, char** out) {
    return guard(out, [&] { return need(ws).fulfill(need_str(offer, "offer")); });
}

bcsse_status bcsse_refund(bcsse_workspace* ws, const char* offer, char** out) {
    return guard(out, [&] { return need(ws).refund(need_str(offer, "offer")); });
}

bcsse_status bcsse_abort(bcsse_workspace* ws, const char* offer, char** out) {
    return guard(out, [&] { return need(ws).abort(need_str(offer, "offer")); });
}

bcsse_status bcsse_mine(bcsse_workspace* ws, uint64_t blocks, char** out) {
    return guard(out, [&] { return need(ws).mine(blocks); });
}

bcsse_status bcsse_inspect(bcsse_workspace* ws, const char* txid, char** out) {
    return guard(out, [&] {
        std::optional<std::string> t;
        if (txid) t = txid;
        return need(ws).inspect(t);
    });
}

bcsse_status bcsse_decrypt(bcsse_workspace* ws, const char* offer, char** out) {
    return guard(out, [&] { return need(ws).decrypt(need_str(offer, "offer")); });
}

bcsse_status bcsse_run_scenario(bcsse_workspace* ws, const char* script, char** out) {
    return guard(out, [&] { return need(ws).scenario(need_str(script, "script")); });
}

bcsse_status bcsse_bench(const char* pair_counts, char** out) {
    return guard(out, [&] {
        bcsse::workspace::BenchOptions opts;
        if (pair_counts) {
            opts.pair_counts.clear();
            std::string s = pair_counts;
            std::size_t start = 0;
            while (start <= s.size()) {
                auto comma = s.find(',', start);
                std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                char* end = nullptr;
                unsigned long long v = std::strtoull(item.c_str(), &end, 10);
                if (item.empty() || *end != '\0')
                    throw bcsse::Error(bcsse::Errc::parameter, "bad pair count '" + item + "'");
                opts.pair_counts.push_back(v);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
        auto rows = bcsse::workspace::run_bench(opts);
        return bcsse::workspace::bench_tsv(rows);
    });
}

}  // extern "C"
