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

#include <bshash/mphf.hpp>

#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace bshash {

namespace {

    //! True iff the index maps the keys onto [0, N) bijectively.
    bool is_permutation(const Mphf& f, std::span<const std::string> keys) {
        std::vector<uint8_t> hit(keys.size(), 0);
        for (const std::string& k : keys) {
            const uint64_t p = f(k);
            if (p >= keys.size() || hit[p]++) return false;
        }
        return true;
    }

    BuildConfig config(uint32_t leaf_size, Engine engine = Engine::kQuadSplit, bool compact = true) {
        BuildConfig cfg;
        cfg.leaf_size = leaf_size;
        cfg.engine = engine;
        cfg.compact = compact;
        return cfg;
    }

    const std::vector<std::string>& keys_100k() {
        static const std::vector<std::string> keys = test::random_strings(100'000, 81);
        return keys;
    }

}  // namespace

TEST(Mphf, EmptyIndex) {
    const std::vector<std::string> none;
    const Mphf f = Mphf::build(none, config(32));
    EXPECT_EQ(f.size(), 0u);
    EXPECT_EQ(f.num_buckets(), 0u);
    const auto bytes = f.serialize();
    EXPECT_EQ(Mphf::deserialize(bytes).serialize(), bytes);
}

TEST(Mphf, SingleKey) {
    const std::vector<std::string> one{"only"};
    const Mphf f = Mphf::build(one, config(32));
    EXPECT_EQ(f("only"), 0u);
    EXPECT_EQ(f("other"), 0u);
}

TEST(Mphf, SmallSetsAllLeafSizes) {
    for (Engine e : {Engine::kBasic, Engine::kRotation, Engine::kQuadSplit}) {
        for (uint32_t leaf : {2u, 3u, 8u, 17u, 32u, 64u}) {
            for (std::size_t n : {2u, 5u, 63u, 1000u}) {
                const auto keys = test::random_strings(n, n * 131 + leaf);
                const Mphf f = Mphf::build(keys, config(leaf, e));
                ASSERT_TRUE(is_permutation(f, keys)) << engine_name(e) << " leaf=" << leaf << " n=" << n;
            }
        }
    }
}

TEST(Mphf, PermutationAtLeafSize32) {
    const auto& keys = keys_100k();
    BuildStats stats;
    const Mphf f = Mphf::build(keys, config(32), &stats);
    EXPECT_EQ(f.size(), keys.size());
    EXPECT_EQ(f.num_buckets(), (keys.size() + 31) / 32);
    EXPECT_TRUE(is_permutation(f, keys));
    EXPECT_LE(stats.largest_bucket, kMaxLeafSize);
}

TEST(Mphf, OutOfSetKeysStayInRange) {
    const auto& keys = keys_100k();
    const Mphf f = Mphf::build(keys, config(32));
    for (const std::string& k : test::random_strings(50'000, 82)) ASSERT_LT(f(k), keys.size());
}

TEST(Mphf, StringViewOverloadAgrees) {
    const auto keys = test::random_strings(5000, 83);
    const std::vector<std::string_view> views(keys.begin(), keys.end());
    EXPECT_EQ(Mphf::build(views, config(24)).serialize(), Mphf::build(keys, config(24)).serialize());
}

TEST(Mphf, SerializationRoundTrip) {
    const auto& keys = keys_100k();
    for (bool compact : {true, false}) {
        const Mphf f = Mphf::build(keys, config(32, Engine::kQuadSplit, compact));
        const auto bytes = f.serialize();
        const Mphf g = Mphf::deserialize(bytes);
        EXPECT_EQ(g.serialize(), bytes);
        EXPECT_EQ(g.compact(), compact);
        EXPECT_EQ(g.leaf_size(), 32u);
        EXPECT_EQ(g.engine(), Engine::kQuadSplit);
        for (const std::string& k : keys) ASSERT_EQ(g(k), f(k));
    }
}

TEST(Mphf, DeterministicAcrossRunsThreadsAndInputOrder) {
    auto keys = test::random_strings(50'000, 84);
    const auto reference = Mphf::build(keys, config(32)).serialize();
    EXPECT_EQ(Mphf::build(keys, config(32)).serialize(), reference);
    for (uint32_t threads : {2u, 3u, 8u}) {
        BuildConfig cfg = config(32);
        cfg.threads = threads;
        EXPECT_EQ(Mphf::build(keys, cfg).serialize(), reference) << threads;
    }
    std::shuffle(keys.begin(), keys.end(), std::mt19937_64{85});
    EXPECT_EQ(Mphf::build(keys, config(32)).serialize(), reference);
}

TEST(Mphf, GlobalSeedChangesTheIndex) {
    const auto keys = test::random_strings(10'000, 86);
    BuildConfig cfg = config(32);
    cfg.global_seed = 99;
    const Mphf f = Mphf::build(keys, cfg);
    EXPECT_EQ(f.global_seed(), 99u);
    EXPECT_NE(f.serialize(), Mphf::build(keys, config(32)).serialize());
    EXPECT_TRUE(is_permutation(f, keys));
}

TEST(Mphf, RebuildsWithNextSeedWhenLeavesFail) {
    const auto keys = test::random_strings(2000, 87);
    BuildConfig cfg = config(16, Engine::kBasic);
    cfg.max_pair_code = 200;  // most buckets fail, so each attempt fails and the budget runs out
    cfg.max_rebuilds = 2;
    BuildStats stats;
    EXPECT_THROW((void)Mphf::build(keys, cfg, &stats), BuildError);
    EXPECT_EQ(stats.leaf_failures, 3u);
}

TEST(Mphf, DuplicateKeysThrow) {
    auto keys = test::random_strings(1000, 88);
    keys.push_back(keys[500]);
    EXPECT_THROW((void)Mphf::build(keys, config(32)), DuplicateKeyError);
}

TEST(Mphf, LeafSizeValidation) {
    const auto keys = test::random_strings(100, 89);
    EXPECT_THROW((void)Mphf::build(keys, config(1)), std::invalid_argument);
    EXPECT_THROW((void)Mphf::build(keys, config(65)), std::invalid_argument);
}

TEST(Mphf, CorruptedIndexIsRejected) {
    const auto keys = test::random_strings(5000, 90);
    const auto bytes = Mphf::build(keys, config(32)).serialize();

    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= std::byte{0x10};
    EXPECT_THROW((void)Mphf::deserialize(flipped), FormatError);

    auto checksum = bytes;
    checksum.back() ^= std::byte{1};
    EXPECT_THROW((void)Mphf::deserialize(checksum), FormatError);

    auto magic = bytes;
    magic[0] = std::byte{'X'};
    EXPECT_THROW((void)Mphf::deserialize(magic), FormatError);

    auto version = bytes;
    version[4] = std::byte{2};
    EXPECT_THROW((void)Mphf::deserialize(version), FormatError);

    for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{10}, std::size_t{40}, bytes.size() / 2,
                            bytes.size() - 1}) {
        EXPECT_THROW((void)Mphf::deserialize(std::span{bytes}.first(len)), FormatError) << len;
    }
}

TEST(Mphf, ConsistentButWrongHeaderIsRejected) {
    // A header edit with a recomputed checksum must still fail block validation.
    const auto keys = test::random_strings(5000, 91);
    auto bytes = Mphf::build(keys, config(32)).serialize();
    bytes[12] ^= std::byte{1};  // N
    const auto body = std::span{bytes}.first(bytes.size() - 8);
    const uint64_t sum = index_checksum(body);
    for (int i = 0; i < 8; ++i) bytes[bytes.size() - 8 + i] = static_cast<std::byte>(sum >> (8 * i));
    EXPECT_THROW((void)Mphf::deserialize(bytes), FormatError);
}

TEST(Mphf, SpaceReportMatchesSerializedSize) {
    const auto& keys = keys_100k();
    const Mphf f = Mphf::build(keys, config(32));
    const SpaceReport r = f.space_report();
    EXPECT_EQ(r.keys, keys.size());
    // Serialized bytes are the reported bits minus the rebuilt select samples, up to byte padding.
    const uint64_t serialized_bits = 8 * f.serialize().size();
    EXPECT_LE(serialized_bits, r.total_bits());
    EXPECT_GE(serialized_bits + 64 * 64, r.total_bits() - f.leaf_codes().select_bits());
    EXPECT_LE(r.per_key(r.retrieval_bits), 1.30);
    EXPECT_LE(r.per_key(r.offset_bits), (2.0 + std::log2(32.0)) / 32 + 0.02);
}

TEST(Mphf, SeedBitsAtLeafSize32) {
    double total = 0;
    constexpr int kBuilds = 20;
    const auto keys = test::random_strings(100'000, 92);
    for (int b = 0; b < kBuilds; ++b) {
        BuildConfig cfg = config(32);
        cfg.global_seed = 1000 + b;
        const SpaceReport r = Mphf::build(keys, cfg).space_report();
        const double seed_bits = r.per_key(r.seed_bits);
        EXPECT_GE(seed_bits, 0.30);
        EXPECT_LE(seed_bits, 0.60);
        total += seed_bits;
    }
    EXPECT_GE(total / kBuilds, 0.30);
    EXPECT_LE(total / kBuilds, 0.60);
}

TEST(Mphf, CompactNeverExceedsPlainSeedStorage) {
    for (std::size_t n : {10'000u, 50'000u}) {
        for (uint32_t leaf : {8u, 32u, 64u}) {
            const auto keys = test::random_strings(n, n + leaf);
            const SpaceReport compact = Mphf::build(keys, config(leaf, Engine::kQuadSplit, true)).space_report();
            const SpaceReport plain = Mphf::build(keys, config(leaf, Engine::kQuadSplit, false)).space_report();
            EXPECT_LE(compact.seed_bits, plain.seed_bits) << n << " " << leaf;
        }
    }
}

}  // namespace bshash
