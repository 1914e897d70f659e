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
#include <bshash/elias_fano.hpp>
#include <bshash/leaf_codes.hpp>

#include <bit>
#include <random>

#include <gtest/gtest.h>

namespace bshash {

namespace {

    std::vector<uint64_t> geometric_codes(std::size_t count, double mean, uint64_t seed) {
        std::mt19937_64 rng{seed};
        std::geometric_distribution<uint64_t> dist{1.0 / (mean + 1)};
        std::vector<uint64_t> codes(count);
        for (uint64_t& c : codes) c = dist(rng);
        return codes;
    }

    template <typename T>
    T round_trip(const T& value) {
        ByteWriter out;
        value.serialize(out);
        const auto bytes = out.take();
        ByteReader in{bytes};
        T back = T::deserialize(in);
        EXPECT_EQ(in.remaining(), 0u);
        return back;
    }

}  // namespace

TEST(BitVector, AppendAndGet) {
    std::mt19937_64 rng{71};
    BitVector bv;
    std::vector<std::pair<uint64_t, uint32_t>> fields;
    for (int i = 0; i < 5000; ++i) {
        const auto width = static_cast<uint32_t>(rng() % 65);
        const uint64_t value = width == 64 ? rng() : rng() & ((uint64_t{1} << width) - 1);
        fields.emplace_back(value, width);
        bv.append(value, width);
    }
    uint64_t pos = 0;
    for (auto [value, width] : fields) {
        ASSERT_EQ(bv.get(pos, width), value);
        for (uint32_t b = 0; b < width; ++b) ASSERT_EQ(bv[pos + b], ((value >> b) & 1) != 0);
        pos += width;
    }
    EXPECT_EQ(bv.size(), pos);
    EXPECT_EQ(round_trip(bv), bv);
}

TEST(BitVector, SelectInWord) {
    std::mt19937_64 rng{72};
    for (int t = 0; t < 10'000; ++t) {
        const uint64_t w = rng() & rng();
        if (w == 0) continue;
        uint32_t rank = 0;
        for (uint32_t p = 0; p < 64; ++p) {
            if ((w >> p) & 1) ASSERT_EQ(select_in_word(w, rank++), p);
        }
    }
}

TEST(BitVector, SelectAndNextOneMatchNaive) {
    std::mt19937_64 rng{73};
    for (double density : {0.001, 0.05, 0.5, 0.99}) {
        BitVector bv;
        std::vector<uint64_t> ones;
        for (uint64_t i = 0; i < 100'000; ++i) {
            const bool bit = std::uniform_real_distribution<double>{}(rng) < density;
            if (bit) ones.push_back(i);
            bv.push_back(bit);
        }
        const SelectIndex index{bv};
        ASSERT_EQ(index.ones(), ones.size());
        for (uint64_t i = 0; i < ones.size(); ++i) ASSERT_EQ(index.select(bv, i), ones[i]);
        std::size_t next = 0;
        for (uint64_t pos = 0; pos < bv.size(); pos += 1 + rng() % 50) {
            while (next < ones.size() && ones[next] < pos) ++next;
            ASSERT_EQ(SelectIndex::next_one(bv, pos), next < ones.size() ? ones[next] : bv.size());
        }
    }
}

TEST(EliasFano, MatchesInput) {
    std::mt19937_64 rng{74};
    for (uint64_t step : {0u, 1u, 3u, 64u, 1000u, 1u << 20}) {
        std::vector<uint64_t> values(20'000);
        uint64_t v = 0;
        for (uint64_t& x : values) {
            v += step == 0 ? 0 : rng() % (2 * step);
            x = v;
        }
        const EliasFano ef{values};
        ASSERT_EQ(ef.size(), values.size());
        for (uint64_t i = 0; i < values.size(); ++i) ASSERT_EQ(ef[i], values[i]);
        for (uint64_t i = 0; i + 1 < values.size(); ++i) {
            ASSERT_EQ(ef.adjacent(i), std::make_pair(values[i], values[i + 1]));
        }
        const EliasFano back = round_trip(ef);
        for (uint64_t i = 0; i < values.size(); i += 7) ASSERT_EQ(back[i], values[i]);
    }
}

TEST(EliasFano, SpaceNearBound) {
    // Bucket offsets of a leaf size 64 index: about 2 + log2(64) bits per element.
    std::vector<uint64_t> values(100'001);
    std::mt19937_64 rng{75};
    std::poisson_distribution<uint64_t> bucket{64.0};
    for (std::size_t i = 1; i < values.size(); ++i) values[i] = values[i - 1] + bucket(rng);
    const EliasFano ef{values};
    EXPECT_LE(static_cast<double>(ef.payload_bits()) / values.size(), 2.0 + std::log2(64.0) + 0.1);
}

TEST(EliasFano, RejectsDecreasingInput) {
    const std::vector<uint64_t> values{1, 5, 4};
    EXPECT_THROW((void)EliasFano{values}, std::invalid_argument);
}

TEST(EliasFano, SingleAndEmpty) {
    const std::vector<uint64_t> one{0};
    const EliasFano ef{one};
    EXPECT_EQ(ef[0], 0u);
    EXPECT_EQ(round_trip(ef)[0], 0u);
    const EliasFano empty{std::span<const uint64_t>{}};
    EXPECT_EQ(empty.size(), 0u);
    EXPECT_EQ(round_trip(empty).size(), 0u);
}

TEST(LeafCodes, RiceParameter) {
    EXPECT_EQ(rice_parameter(std::vector<uint64_t>{}), 0u);
    EXPECT_EQ(rice_parameter(std::vector<uint64_t>{0, 0}), 0u);
    EXPECT_EQ(rice_parameter(std::vector<uint64_t>{1, 2}), 1u);     // mean 1.5
    EXPECT_EQ(rice_parameter(std::vector<uint64_t>{100, 200}), 7u);  // mean 150
    EXPECT_EQ(rice_parameter(std::vector<uint64_t>{UINT64_MAX, UINT64_MAX}), 64u);
    EXPECT_EQ(LeafCodes(std::vector<uint64_t>{UINT64_MAX, UINT64_MAX}, LeafCodes::Mode::kRice).rice_parameter(), 63u);
}

TEST(LeafCodes, RiceAndPlainMatchInput) {
    for (double mean : {0.0, 3.0, 1e4, 1e12}) {
        const auto codes = geometric_codes(30'000, mean, 76);
        for (auto mode : {LeafCodes::Mode::kPlain, LeafCodes::Mode::kRice}) {
            const LeafCodes lc{codes, mode};
            ASSERT_EQ(lc.size(), codes.size());
            for (uint64_t i = 0; i < codes.size(); ++i) ASSERT_EQ(lc[i], codes[i]);
            const LeafCodes back = round_trip(lc);
            EXPECT_EQ(back.mode(), mode);
            for (uint64_t i = 0; i < codes.size(); ++i) ASSERT_EQ(back[i], codes[i]);
        }
    }
}

TEST(LeafCodes, RiceNearEntropyForGeometricCodes) {
    // Rice coding of a geometric source stays within about one bit of its entropy.
    const double mean = 5000;
    const auto codes = geometric_codes(100'000, mean, 77);
    const LeafCodes lc{codes, LeafCodes::Mode::kRice};
    const double p = 1.0 / (mean + 1);
    const double entropy = (-(1 - p) * std::log2(1 - p) - p * std::log2(p)) / p;
    const double bits = static_cast<double>(lc.payload_bits()) / codes.size();
    EXPECT_LT(bits, entropy + 1.1);
    EXPECT_LT(lc.payload_bits(), LeafCodes(codes, LeafCodes::Mode::kPlain).payload_bits());
}

TEST(LeafCodes, ExtremeValues) {
    const std::vector<uint64_t> codes{0, UINT64_MAX, 1, uint64_t{1} << 63, 12345};
    for (auto mode : {LeafCodes::Mode::kPlain, LeafCodes::Mode::kRice}) {
        const LeafCodes lc{codes, mode};
        for (uint64_t i = 0; i < codes.size(); ++i) EXPECT_EQ(lc[i], codes[i]);
    }
}

TEST(ByteIo, LittleEndianAndTruncation) {
    ByteWriter out;
    out.put_u16(0x0102);
    out.put_u32(0x03040506);
    out.put_u64(0x0708090a0b0c0d0eULL);
    const auto bytes = out.take();
    EXPECT_EQ(bytes[0], std::byte{0x02});
    EXPECT_EQ(bytes[2], std::byte{0x06});
    ByteReader in{bytes};
    EXPECT_EQ(in.get_u16(), 0x0102);
    EXPECT_EQ(in.get_u32(), 0x03040506u);
    EXPECT_EQ(in.get_u64(), 0x0708090a0b0c0d0eULL);
    EXPECT_THROW((void)in.get_u8(), FormatError);
}

TEST(ByteIo, BitPaddingMustBeZero) {
    ByteWriter out;
    const std::vector<uint64_t> words{0b101};
    out.put_bits(words, 3);
    auto bytes = out.take();
    ASSERT_EQ(bytes.size(), 1u);
    {
        ByteReader in{bytes};
        EXPECT_EQ(in.get_bits(3), words);
    }
    bytes[0] |= std::byte{0x80};
    ByteReader in{bytes};
    EXPECT_THROW((void)in.get_bits(3), FormatError);
}

}  // namespace bshash
