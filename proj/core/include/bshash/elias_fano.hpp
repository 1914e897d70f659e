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
#include <utility>

#include <bshash/bit_vector.hpp>
#include <bshash/byte_io.hpp>

namespace bshash {

//! Elias–Fano coded non-decreasing sequence: fixed-width low bits, unary-coded high bits with select.
class EliasFano {
  public:
    EliasFano() = default;
    explicit EliasFano(std::span<const uint64_t> values);

    [[nodiscard]] uint64_t operator[](uint64_t i) const;

    //! Elements i and i + 1 with a single select.
    [[nodiscard]] std::pair<uint64_t, uint64_t> adjacent(uint64_t i) const;

    [[nodiscard]] uint64_t size() const { return count_; }
    [[nodiscard]] uint32_t low_width() const { return low_width_; }

    //! Bits of the coded sequence (low and high arrays).
    [[nodiscard]] uint64_t payload_bits() const { return lows_.size() + highs_.size(); }
    [[nodiscard]] uint64_t select_bits() const { return select_.size_in_bits(); }

    void serialize(ByteWriter& out) const;
    static EliasFano deserialize(ByteReader& in);

  private:
    [[nodiscard]] uint64_t low(uint64_t i) const { return lows_.get(i * low_width_, low_width_); }

    uint64_t count_{0};
    uint32_t low_width_{0};
    BitVector lows_;
    BitVector highs_;
    SelectIndex select_;
};

}  // namespace bshash
