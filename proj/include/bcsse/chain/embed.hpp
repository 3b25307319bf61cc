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

#include "bcsse/chain/ledger.hpp"

namespace bcsse::chain {

enum class EmbedMode : std::uint8_t { single, split3 };

/// Field widths of a record t || e || h || prev laid out for split3.
/// The link width comes from the ledger's txid length.
struct SplitLayout {
    std::size_t token_bytes = 32;
    std::size_t digest_bytes = 32;
};

/// Fragments to post in order. For split3, fragments 2 and 3 are completed
/// at posting time by appending the txid of the previously posted fragment:
///   T1: h || prev     T2: e || txid(T1)     T3: t || txid(T2)
struct EmbedPlan {
    EmbedMode mode = EmbedMode::single;
    std::vector<Payload> fragments;
};

/// Throws Error(payload_too_large) if any fragment (with its link) exceeds
/// embed_limit, Error(parameter) if a split3 payload is too short for its
/// layout.
EmbedPlan embed_payload(ByteView payload, EmbedMode mode, std::size_t embed_limit, std::size_t link_bytes,
                        SplitLayout layout = {});

}  // namespace bcsse::chain
