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

#include <bshash/retrieval.hpp>

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace bshash {

namespace {

    std::vector<RetrievalEntry> random_entries(std::size_t count, uint64_t seed) {
        std::mt19937_64 rng{seed};
        std::vector<RetrievalEntry> entries;
        for (const MasterHash& m : test::random_hashes(count, seed)) entries.push_back({m, (rng() & 1) != 0});
        return entries;
    }

}  // namespace

TEST(Retrieval, EmptyInput) {
    const XorRetrieval r = XorRetrieval::build({});
    EXPECT_EQ(r.slots(), 0u);
    EXPECT_FALSE(r.query({1, 2}));
}

TEST(Retrieval, SingleEntry) {
    for (bool bit : {false, true}) {
        const std::vector<RetrievalEntry> one{{{42, 43}, bit}};
        EXPECT_EQ(XorRetrieval::build(one).query({42, 43}), bit);
    }
}

TEST(Retrieval, SmallSetsAreExact) {
    for (std::size_t n = 1; n < 300; n += 7) {
        const auto entries = random_entries(n, n);
        const XorRetrieval r = XorRetrieval::build(entries, n);
        for (const RetrievalEntry& e : entries) ASSERT_EQ(r.query(e.key), e.bit) << n;
    }
}

TEST(Retrieval, ExactRecallAndSpace) {
    const auto entries = random_entries(100'000, 61);
    const XorRetrieval r = XorRetrieval::build(entries);
    for (const RetrievalEntry& e : entries) ASSERT_EQ(r.query(e.key), e.bit);
    EXPECT_LE(static_cast<double>(r.size_in_bits()) / entries.size(), 1.30);
    EXPECT_EQ(r.slots() % 3, 0u);
}

TEST(Retrieval, ExactRecallOnMillionKeys) {
    const auto entries = random_entries(1'000'000, 62);
    const XorRetrieval r = XorRetrieval::build(entries, 9);
    uint64_t errors = 0;
    for (const RetrievalEntry& e : entries) errors += r.query(e.key) != e.bit;
    EXPECT_EQ(errors, 0u);
}

TEST(Retrieval, NonMembersLookRandom) {
    const auto entries = random_entries(100'000, 63);
    const XorRetrieval r = XorRetrieval::build(entries);
    constexpr int kProbes = 100'000;
    int ones = 0;
    for (const MasterHash& m : test::random_hashes(kProbes, 64)) {
        ones += r.query(m);
        ASSERT_EQ(r.query(m), r.query(m));
    }
    EXPECT_LT(std::abs(ones - kProbes / 2.0), 3 * std::sqrt(kProbes * 0.25)) << ones;
}

TEST(Retrieval, AllZeroAndAllOneBits) {
    auto entries = random_entries(10'000, 65);
    for (bool bit : {false, true}) {
        for (RetrievalEntry& e : entries) e.bit = bit;
        const XorRetrieval r = XorRetrieval::build(entries);
        for (const RetrievalEntry& e : entries) ASSERT_EQ(r.query(e.key), bit);
    }
}

TEST(Retrieval, SerializationRoundTrip) {
    const auto entries = random_entries(5000, 66);
    const XorRetrieval r = XorRetrieval::build(entries, 3);
    ByteWriter out;
    r.serialize(out);
    const auto bytes = out.take();
    EXPECT_EQ(bytes.size(), 16 + (r.slots() + 7) / 8);
    ByteReader in{bytes};
    const XorRetrieval back = XorRetrieval::deserialize(in);
    EXPECT_EQ(in.remaining(), 0u);
    EXPECT_EQ(back, r);
    for (const RetrievalEntry& e : entries) ASSERT_EQ(back.query(e.key), e.bit);
}

TEST(Retrieval, DeserializeRejectsBadInput) {
    const auto entries = random_entries(100, 67);
    ByteWriter out;
    XorRetrieval::build(entries).serialize(out);
    auto bytes = out.take();
    {
        ByteReader in{std::span{bytes}.first(bytes.size() - 1)};
        EXPECT_THROW((void)XorRetrieval::deserialize(in), FormatError);
    }
    bytes[0] = std::byte{1};  // slot count no longer a multiple of 3
    ByteReader in{bytes};
    EXPECT_THROW((void)XorRetrieval::deserialize(in), FormatError);
}

TEST(Retrieval, DeterministicPerSeed) {
    const auto entries = random_entries(20'000, 68);
    EXPECT_EQ(XorRetrieval::build(entries, 5), XorRetrieval::build(entries, 5));
}

TEST(Retrieval, DuplicateKeysThrow) {
    auto entries = random_entries(1000, 69);
    entries.push_back({entries[10].key, !entries[10].bit});
    EXPECT_THROW((void)XorRetrieval::build(entries), RetrievalBuildError);
}

}  // namespace bshash
