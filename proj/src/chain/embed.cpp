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

#include "bcsse/chain/embed.hpp"
#include "bcsse/chain/wallet.hpp"

namespace bcsse::chain {

namespace {

void check_fits(std::size_t size, std::size_t limit, const char* what) {
    if (size > limit)
        throw Error(Errc::payload_too_large, std::string(what) + " needs " + std::to_string(size) +
                                                 " bytes, embed limit is " + std::to_string(limit));
}

}  // namespace

EmbedPlan embed_payload(ByteView payload, EmbedMode mode, std::size_t embed_limit, std::size_t link_bytes,
                        SplitLayout layout) {
    EmbedPlan plan;
    plan.mode = mode;
    if (mode == EmbedMode::single) {
        check_fits(payload.size(), embed_limit, "payload");
        plan.fragments.push_back(Payload{PayloadKind::raw, Bytes(payload.begin(), payload.end())});
        return plan;
    }

    const std::size_t fixed = layout.token_bytes + layout.digest_bytes + link_bytes;
    if (payload.size() < fixed) throw Error(Errc::parameter, "split3 payload shorter than t || h || prev");
    const std::size_t e_len = payload.size() - fixed;
    auto at = [&](std::size_t off, std::size_t len) {
        return Bytes(payload.begin() + static_cast<std::ptrdiff_t>(off),
                     payload.begin() + static_cast<std::ptrdiff_t>(off + len));
    };
    Bytes token = at(0, layout.token_bytes);
    Bytes list = at(layout.token_bytes, e_len);
    Bytes digest_and_prev = at(layout.token_bytes + e_len, layout.digest_bytes + link_bytes);

    check_fits(digest_and_prev.size(), embed_limit, "split fragment 1 (h || prev)");
    check_fits(list.size() + link_bytes, embed_limit, "split fragment 2 (e || link)");
    check_fits(token.size() + link_bytes, embed_limit, "split fragment 3 (t || link)");

    plan.fragments.push_back(Payload{PayloadKind::split1, std::move(digest_and_prev)});
    plan.fragments.push_back(Payload{PayloadKind::split2, std::move(list)});
    plan.fragments.push_back(Payload{PayloadKind::split3, std::move(token)});
    return plan;
}

std::vector<Txid> post_plan(Ledger& ledger, const Wallet& wallet, const EmbedPlan& plan, std::uint64_t fee,
                            ConfirmPolicy policy) {
    std::vector<Txid> ids;
    for (std::size_t i = 0; i < plan.fragments.size(); ++i) {
        Payload p = plan.fragments[i];
        if (plan.mode == EmbedMode::split3 && i > 0) append(p.data, ids.back().bytes());
        ids.push_back(confirm(ledger, wallet.build_payload_tx(ledger, std::move(p), fee), policy));
    }
    return ids;
}

}  // namespace bcsse::chain
