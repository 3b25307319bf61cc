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

// Fixed-order, big-endian, length-prefixed binary encoding shared by the
// transaction, ledger and payload formats.

#include "bcsse/common.hpp"

#include <string>

namespace bcsse::serial {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    /// u32 length prefix followed by the raw bytes.
    void blob(ByteView b) {
        u32(static_cast<std::uint32_t>(b.size()));
        raw(b);
    }
    void str(std::string_view s) {
        blob(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    }
    void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }

    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }

private:
    Bytes out_;
};

/// Bounds-checked reader; any overrun throws Error(integrity).
class Reader {
public:
    explicit Reader(ByteView in) : in_(in) {}

    std::uint8_t u8() {
        need(1);
        return in_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_++];
        return v;
    }
    Bytes blob() { return raw(u32()); }
    std::string str() {
        Bytes b = blob();
        return std::string(b.begin(), b.end());
    }
    Bytes raw(std::size_t n) {
        need(n);
        Bytes out(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return out;
    }

    std::size_t remaining() const noexcept { return in_.size() - pos_; }
    bool done() const noexcept { return pos_ == in_.size(); }
    void expect_done() const {
        if (!done()) throw Error(Errc::integrity, "trailing bytes after encoded value");
    }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw Error(Errc::integrity, "truncated encoding");
    }

    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace bcsse::serial
