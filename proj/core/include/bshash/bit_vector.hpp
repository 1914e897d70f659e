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

#include <bshash/byte_io.hpp>

namespace bshash {

//! Append-only bit array with fixed-width field access.
class BitVector {
  public:
    BitVector() = default;
    BitVector(std::vector<uint64_t> words, uint64_t size);

    void push_back(bool bit) { append(bit ? 1 : 0, 1); }

    //! Appends the low `width` bits of `value` (width <= 64).
    void append(uint64_t value, uint32_t width);

    [[nodiscard]] bool operator[](uint64_t pos) const { return ((words_[pos / 64] >> (pos % 64)) & 1) != 0; }

    //! Reads `width` bits (<= 64) starting at `pos`.
    [[nodiscard]] uint64_t get(uint64_t pos, uint32_t width) const;

    [[nodiscard]] uint64_t size() const { return size_; }
    [[nodiscard]] std::span<const uint64_t> words() const { return words_; }

    void serialize(ByteWriter& out) const;
    static BitVector deserialize(ByteReader& in);

    friend bool operator==(const BitVector&, const BitVector&) = default;

  private:
    std::vector<uint64_t> words_;
    uint64_t size_{0};
};

//! Position of the (rank+1)-th set bit of a word; the word must have more than `rank` set bits.
uint32_t select_in_word(uint64_t word, uint32_t rank);

//! Sampled select over the set bits of a BitVector. Rebuilt on load, never serialized.
class SelectIndex {
  public:
    static constexpr uint64_t kSampleRate = 256;

    SelectIndex() = default;
    explicit SelectIndex(const BitVector& bits);

    //! Position of the i-th set bit (0-based). Requires i < ones().
    [[nodiscard]] uint64_t select(const BitVector& bits, uint64_t i) const;

    //! First set bit at or after `pos`; bits.size() if there is none.
    [[nodiscard]] static uint64_t next_one(const BitVector& bits, uint64_t pos);

    [[nodiscard]] uint64_t ones() const { return ones_; }
    [[nodiscard]] uint64_t size_in_bits() const { return 64 * samples_.size(); }

  private:
    std::vector<uint64_t> samples_;
    uint64_t ones_{0};
};

}  // namespace bshash
