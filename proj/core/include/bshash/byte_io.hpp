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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

//! Little-endian byte streams for the index file format.
namespace bshash {

class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ByteWriter {
  public:
    void put_u8(uint8_t v) { bytes_.push_back(static_cast<std::byte>(v)); }
    void put_u16(uint16_t v) { put_le(v, 2); }
    void put_u32(uint32_t v) { put_le(v, 4); }
    void put_u64(uint64_t v) { put_le(v, 8); }
    void put_bytes(std::span<const std::byte> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }

    //! Words written as ceil(bits / 8) bytes, bit i of the stream at byte i / 8, bit i % 8.
    void put_bits(std::span<const uint64_t> words, uint64_t bits) {
        const uint64_t nbytes = (bits + 7) / 8;
        for (uint64_t i = 0; i < nbytes; ++i) put_u8(static_cast<uint8_t>(words[i / 8] >> (8 * (i % 8))));
    }

    [[nodiscard]] std::size_t size() const { return bytes_.size(); }
    [[nodiscard]] const std::vector<std::byte>& bytes() const { return bytes_; }
    std::vector<std::byte> take() { return std::move(bytes_); }

  private:
    void put_le(uint64_t v, int width) {
        for (int i = 0; i < width; ++i) put_u8(static_cast<uint8_t>(v >> (8 * i)));
    }

    std::vector<std::byte> bytes_;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    uint8_t get_u8() {
        need(1);
        return static_cast<uint8_t>(bytes_[pos_++]);
    }
    uint16_t get_u16() { return static_cast<uint16_t>(get_le(2)); }
    uint32_t get_u32() { return static_cast<uint32_t>(get_le(4)); }
    uint64_t get_u64() { return get_le(8); }

    std::span<const std::byte> get_bytes(uint64_t count) {
        need(count);
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    std::vector<uint64_t> get_bits(uint64_t bits) {
        const uint64_t nbytes = (bits + 7) / 8;
        need(nbytes);
        std::vector<uint64_t> words((bits + 63) / 64, 0);
        for (uint64_t i = 0; i < nbytes; ++i) {
            words[i / 8] |= static_cast<uint64_t>(static_cast<uint8_t>(bytes_[pos_ + i])) << (8 * (i % 8));
        }
        pos_ += nbytes;
        // Padding bits must be zero so that re-serialization reproduces the input.
        if (bits % 64 != 0 && (words.back() >> (bits % 64)) != 0) throw FormatError("non-zero padding bits");
        return words;
    }

    [[nodiscard]] std::size_t position() const { return pos_; }
    [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }

  private:
    void need(uint64_t count) const {
        if (count > bytes_.size() - pos_) {
            throw FormatError("truncated input: need " + std::to_string(count) + " bytes at offset " +
                              std::to_string(pos_));
        }
    }

    uint64_t get_le(int width) {
        need(static_cast<uint64_t>(width));
        uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(bytes_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    std::span<const std::byte> bytes_;
    std::size_t pos_{0};
};

}  // namespace bshash
