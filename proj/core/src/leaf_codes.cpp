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

#include <bshash/leaf_codes.hpp>

#include <algorithm>
#include <bit>

#include <bshash/hashing.hpp>

namespace bshash {

uint32_t rice_parameter(std::span<const uint64_t> codes) {
    if (codes.empty()) return 0;
    uint128 sum = 0;
    for (uint64_t z : codes) sum += z;
    const auto mean = static_cast<uint64_t>(sum / codes.size());
    // floor(log2(mean + 1)) without overflow at mean = 2^64 - 1.
    return mean == UINT64_MAX ? 64 : static_cast<uint32_t>(std::bit_width(mean + 1) - 1);
}

LeafCodes::LeafCodes(std::span<const uint64_t> codes, Mode mode) : mode_(mode), count_(codes.size()) {
    if (mode_ == Mode::kPlain) {
        plain_.assign(codes.begin(), codes.end());
        return;
    }
    rice_k_ = std::min<uint32_t>(bshash::rice_parameter(codes), 63);
    for (uint64_t z : codes) {
        lows_.append(z, rice_k_);
        for (uint64_t q = z >> rice_k_; q > 0; --q) quotients_.push_back(false);
        quotients_.push_back(true);
    }
    select_ = SelectIndex{quotients_};
}

uint64_t LeafCodes::operator[](uint64_t i) const {
    if (mode_ == Mode::kPlain) return plain_[i];
    const uint64_t start = i == 0 ? 0 : select_.select(quotients_, i - 1) + 1;
    const uint64_t end = SelectIndex::next_one(quotients_, start);
    return ((end - start) << rice_k_) | lows_.get(i * rice_k_, rice_k_);
}

uint64_t LeafCodes::payload_bits() const {
    return mode_ == Mode::kPlain ? 64 * count_ : lows_.size() + quotients_.size();
}

void LeafCodes::serialize(ByteWriter& out) const {
    out.put_u8(static_cast<uint8_t>(mode_));
    out.put_u64(count_);
    if (mode_ == Mode::kPlain) {
        for (uint64_t z : plain_) out.put_u64(z);
        return;
    }
    out.put_u8(static_cast<uint8_t>(rice_k_));
    lows_.serialize(out);
    quotients_.serialize(out);
}

LeafCodes LeafCodes::deserialize(ByteReader& in) {
    LeafCodes lc;
    const uint8_t mode = in.get_u8();
    if (mode > 1) throw FormatError("leaf codes: unknown mode");
    lc.mode_ = static_cast<Mode>(mode);
    lc.count_ = in.get_u64();
    if (lc.mode_ == Mode::kPlain) {
        if (lc.count_ > in.remaining() / 8) throw FormatError("leaf codes: truncated plain block");
        lc.plain_.resize(lc.count_);
        for (uint64_t& z : lc.plain_) z = in.get_u64();
        return lc;
    }
    lc.rice_k_ = in.get_u8();
    if (lc.rice_k_ > 63) throw FormatError("leaf codes: invalid Rice parameter");
    lc.lows_ = BitVector::deserialize(in);
    lc.quotients_ = BitVector::deserialize(in);
    lc.select_ = SelectIndex{lc.quotients_};
    if (lc.lows_.size() != lc.count_ * lc.rice_k_ || lc.select_.ones() != lc.count_ ||
        (lc.count_ > 0 && !lc.quotients_[lc.quotients_.size() - 1])) {
        throw FormatError("leaf codes: inconsistent block");
    }
    return lc;
}

}  // namespace bshash
