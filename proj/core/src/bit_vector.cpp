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

#include <bshash/bit_vector.hpp>

#include <bit>

#ifdef __BMI2__
#include <immintrin.h>
#endif

namespace bshash {

namespace {

    constexpr uint64_t low_bits(uint32_t width) { return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1; }

}  // namespace

BitVector::BitVector(std::vector<uint64_t> words, uint64_t size) : words_(std::move(words)), size_(size) {
    if (words_.size() != (size_ + 63) / 64) throw FormatError("bit vector: word count does not match size");
}

void BitVector::append(uint64_t value, uint32_t width) {
    if (width == 0) return;
    value &= low_bits(width);
    const uint32_t offset = size_ % 64;
    if (offset == 0) words_.push_back(0);
    words_.back() |= value << offset;
    if (offset + width > 64) words_.push_back(value >> (64 - offset));
    size_ += width;
}

uint64_t BitVector::get(uint64_t pos, uint32_t width) const {
    if (width == 0) return 0;
    const uint64_t word = pos / 64;
    const uint32_t offset = pos % 64;
    uint64_t v = words_[word] >> offset;
    if (offset + width > 64) v |= words_[word + 1] << (64 - offset);
    return v & low_bits(width);
}

void BitVector::serialize(ByteWriter& out) const {
    out.put_u64(size_);
    out.put_bits(words_, size_);
}

BitVector BitVector::deserialize(ByteReader& in) {
    const uint64_t size = in.get_u64();
    if (size / 8 > in.remaining()) throw FormatError("bit vector: declared size exceeds input");
    return BitVector{in.get_bits(size), size};
}

uint32_t select_in_word(uint64_t word, uint32_t rank) {
#ifdef __BMI2__
    return static_cast<uint32_t>(std::countr_zero(_pdep_u64(uint64_t{1} << rank, word)));
#else
    for (uint32_t i = 0; i < rank; ++i) word &= word - 1;
    return static_cast<uint32_t>(std::countr_zero(word));
#endif
}

SelectIndex::SelectIndex(const BitVector& bits) {
    const auto words = bits.words();
    for (uint64_t w = 0; w < words.size(); ++w) {
        uint64_t word = words[w];
        while (word != 0) {
            if (ones_ % kSampleRate == 0) samples_.push_back(w * 64 + static_cast<uint64_t>(std::countr_zero(word)));
            word &= word - 1;
            ++ones_;
        }
    }
}

uint64_t SelectIndex::select(const BitVector& bits, uint64_t i) const {
    const auto words = bits.words();
    const uint64_t sample = samples_[i / kSampleRate];
    uint64_t remaining = i % kSampleRate;
    uint64_t w = sample / 64;
    // Count from the sampled bit itself, which is the (i - remaining)-th one.
    uint64_t word = words[w] & (~uint64_t{0} << (sample % 64));
    while (true) {
        const auto count = static_cast<uint64_t>(std::popcount(word));
        if (remaining < count) return w * 64 + select_in_word(word, static_cast<uint32_t>(remaining));
        remaining -= count;
        word = words[++w];
    }
}

uint64_t SelectIndex::next_one(const BitVector& bits, uint64_t pos) {
    const auto words = bits.words();
    if (pos >= bits.size()) return bits.size();
    uint64_t w = pos / 64;
    uint64_t word = words[w] & (~uint64_t{0} << (pos % 64));
    while (word == 0) {
        if (++w == words.size()) return bits.size();
        word = words[w];
    }
    return w * 64 + static_cast<uint64_t>(std::countr_zero(word));
}

}  // namespace bshash
