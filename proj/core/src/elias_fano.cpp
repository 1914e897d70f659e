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

#include <bshash/elias_fano.hpp>

#include <bit>
#include <stdexcept>

namespace bshash {

EliasFano::EliasFano(std::span<const uint64_t> values) : count_(values.size()) {
    if (values.empty()) return;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1]) throw std::invalid_argument("EliasFano: sequence is not monotone");
    }
    const uint64_t universe = values.back();
    low_width_ = universe > count_ ? static_cast<uint32_t>(std::bit_width(universe / count_) - 1) : 0;
    uint64_t previous_high = 0;
    for (uint64_t i = 0; i < count_; ++i) {
        lows_.append(values[i], low_width_);
        const uint64_t high = values[i] >> low_width_;
        for (; previous_high < high; ++previous_high) highs_.push_back(false);
        highs_.push_back(true);
    }
    select_ = SelectIndex{highs_};
}

uint64_t EliasFano::operator[](uint64_t i) const {
    const uint64_t high = select_.select(highs_, i) - i;
    return (high << low_width_) | low(i);
}

std::pair<uint64_t, uint64_t> EliasFano::adjacent(uint64_t i) const {
    const uint64_t pos = select_.select(highs_, i);
    const uint64_t next = SelectIndex::next_one(highs_, pos + 1);
    const uint64_t first = ((pos - i) << low_width_) | low(i);
    const uint64_t second = ((next - i - 1) << low_width_) | low(i + 1);
    return {first, second};
}

void EliasFano::serialize(ByteWriter& out) const {
    out.put_u64(count_);
    out.put_u8(static_cast<uint8_t>(low_width_));
    lows_.serialize(out);
    highs_.serialize(out);
}

EliasFano EliasFano::deserialize(ByteReader& in) {
    EliasFano ef;
    ef.count_ = in.get_u64();
    ef.low_width_ = in.get_u8();
    if (ef.low_width_ > 63) throw FormatError("elias-fano: invalid low width");
    ef.lows_ = BitVector::deserialize(in);
    ef.highs_ = BitVector::deserialize(in);
    ef.select_ = SelectIndex{ef.highs_};
    if (ef.count_ > ef.highs_.size() || ef.lows_.size() != ef.count_ * ef.low_width_ || ef.select_.ones() != ef.count_) {
        throw FormatError("elias-fano: inconsistent block");
    }
    return ef;
}

}  // namespace bshash
