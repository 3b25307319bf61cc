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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bcsse {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Error categories surfaced by every layer; the C API maps them 1:1 onto
/// bcsse_status codes.
enum class Errc : std::uint8_t {
    parameter = 1,
    authentication,
    payload_too_large,
    not_found,
    corrupt_chain,
    integrity,
    funding,
    store_timeout,
    cannot_abort,
    configuration,
    claim_rejected,
    rejected,
    validation,
    io,
    locked,
    aborted,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

std::string to_hex(ByteView b);
/// Throws Error(parameter) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

inline void append(Bytes& out, ByteView more) { out.insert(out.end(), more.begin(), more.end()); }

inline Bytes concat(std::initializer_list<ByteView> parts) {
    Bytes out;
    for (auto p : parts) append(out, p);
    return out;
}

/// True if needle occurs as a contiguous run inside haystack.
bool contains_subsequence(ByteView haystack, ByteView needle);

}  // namespace bcsse
