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

#include "bcsse/common.hpp"

#include <algorithm>

namespace bcsse {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::parameter: return "parameter";
        case Errc::authentication: return "authentication";
        case Errc::payload_too_large: return "payload_too_large";
        case Errc::not_found: return "not_found";
        case Errc::corrupt_chain: return "corrupt_chain";
        case Errc::integrity: return "integrity";
        case Errc::funding: return "funding";
        case Errc::store_timeout: return "store_timeout";
        case Errc::cannot_abort: return "cannot_abort";
        case Errc::configuration: return "configuration";
        case Errc::claim_rejected: return "claim_rejected";
        case Errc::rejected: return "rejected";
        case Errc::validation: return "validation";
        case Errc::io: return "io";
        case Errc::locked: return "locked";
        case Errc::aborted: return "aborted";
    }
    return "unknown";
}

std::string to_hex(ByteView b) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (auto c : b) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0x0f]);
    }
    return out;
}

namespace {
int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error(Errc::parameter, "hex string has odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::parameter, "invalid hex character");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

bool contains_subsequence(ByteView haystack, ByteView needle) {
    if (needle.empty()) return true;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

}  // namespace bcsse
