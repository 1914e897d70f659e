/*
   Copyright 2026 The bshash Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <bshash/bit_vector.hpp>
#include <bshash/byte_io.hpp>

namespace bshash {

//! Random-access store of the per-bucket leaf codes.
//!
//! Compact mode is Golomb–Rice coding with one parameter k = floor(log2(mean + 1)) for the whole
//! sequence, split into a fixed-width array of the k low bits and a unary stream of the quotients
//! (one terminating 1 per value) indexed for select. Plain mode stores 64 bits per code.
class LeafCodes {
  public:
    enum class Mode : uint8_t { kPlain = 0, kRice = 1 };

    LeafCodes() = default;
    LeafCodes(std::span<const uint64_t> codes, Mode mode);

    [[nodiscard]] uint64_t operator[](uint64_t i) const;

    [[nodiscard]] uint64_t size() const { return count_; }
    [[nodiscard]] Mode mode() const { return mode_; }
    [[nodiscard]] uint32_t rice_parameter() const { return rice_k_; }

    [[nodiscard]] uint64_t payload_bits() const;
    [[nodiscard]] uint64_t select_bits() const { return select_.size_in_bits(); }

    void serialize(ByteWriter& out) const;
    static LeafCodes deserialize(ByteReader& in);

  private:
    Mode mode_{Mode::kRice};
    uint64_t count_{0};
    uint32_t rice_k_{0};
    std::vector<uint64_t> plain_;
    BitVector lows_;
    BitVector quotients_;
    SelectIndex select_;
};

//! floor(log2(mean + 1)) over a sequence, 0 for an empty one.
uint32_t rice_parameter(std::span<const uint64_t> codes);

}  // namespace bshash
