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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include <bshash/byte_io.hpp>

#include "commands.hpp"
#include "key_file.hpp"
#include "test_support.hpp"

namespace bshash::cli {

namespace {

    std::size_t columns(const std::string& line) { return 1 + std::count(line.begin(), line.end(), ','); }

}  // namespace

TEST(KeyFile, EmptyFileHasHeader) {
    const auto bytes = encode_key_file(generate_keys({.count = 0}));
    ASSERT_EQ(bytes.size(), 12u);
    EXPECT_EQ(bytes[0], std::byte{'B'});
    EXPECT_EQ(bytes[3], std::byte{'K'});
    EXPECT_TRUE(decode_key_file(bytes).empty());
}

TEST(KeyFile, GeneratedKeysFollowTheContract) {
    const KeyGenConfig cfg{.count = 20'000, .seed = 7};
    const auto keys = generate_keys(cfg);
    ASSERT_EQ(keys.size(), cfg.count);
    std::set<std::string> distinct(keys.begin(), keys.end());
    EXPECT_EQ(distinct.size(), keys.size());
    for (const std::string& k : keys) {
        ASSERT_GE(k.size(), 10u);
        ASSERT_LE(k.size(), 50u);
        ASSERT_EQ(k.find('\0'), std::string::npos);
    }
    EXPECT_EQ(encode_key_file(generate_keys(cfg)), encode_key_file(keys));
    EXPECT_NE(generate_keys({.count = 100, .seed = 8}), generate_keys({.count = 100, .seed = 9}));
}

TEST(KeyFile, ShortKeysAreRegeneratedUntilDistinct) {
    // 255 single-byte keys exist; all of them must come out.
    const auto keys = generate_keys({.count = 255, .min_len = 1, .max_len = 1, .seed = 3});
    EXPECT_EQ(std::set<std::string>(keys.begin(), keys.end()).size(), 255u);
    EXPECT_THROW((void)generate_keys({.count = 256, .min_len = 1, .max_len = 1}), std::invalid_argument);
    EXPECT_THROW((void)generate_keys({.count = 1, .min_len = 0, .max_len = 3}), std::invalid_argument);
    EXPECT_THROW((void)generate_keys({.count = 1, .min_len = 5, .max_len = 3}), std::invalid_argument);
}

TEST(KeyFile, RoundTripThroughDisk) {
    const auto keys = generate_keys({.count = 1000, .seed = 4});
    const auto path = std::filesystem::temp_directory_path() / "bshash_cli_test_keys.bin";
    write_key_file(path, keys);
    EXPECT_EQ(read_key_file(path), keys);
    std::filesystem::remove(path);
    EXPECT_THROW((void)read_key_file(path), std::runtime_error);
}

TEST(KeyFile, DecodeRejectsMalformedInput) {
    const std::vector<std::string> keys{"abc", "defg"};
    const auto bytes = encode_key_file(keys);
    EXPECT_EQ(decode_key_file(bytes), keys);
    auto bad_magic = bytes;
    bad_magic[1] = std::byte{'X'};
    EXPECT_THROW((void)decode_key_file(bad_magic), FormatError);
    EXPECT_THROW((void)decode_key_file(std::span{bytes}.first(bytes.size() - 1)), FormatError);
    auto trailing = bytes;
    trailing.push_back(std::byte{0});
    EXPECT_THROW((void)decode_key_file(trailing), FormatError);
}

TEST(Csv, HeaderAndRowsHaveTheSameColumns) {
    const std::string header = csv_header();
    EXPECT_EQ(columns(header), 18u);
    EXPECT_EQ(header.rfind("version,mode,engine,n,N", 0), 0u);
    BenchRecord r;
    r.mode = "leaf";
    r.engine = "basic";
    const std::string row = to_csv(r);
    EXPECT_EQ(columns(row), columns(header));
    EXPECT_EQ(row.rfind(std::string{version()} + ",leaf,basic,", 0), 0u);
}

TEST(Bench, SixRowsForTwoSizesAndThreeEngines) {
    LeafBenchConfig cfg;
    cfg.leaves = 30;
    const auto rows = run_leaf_bench(cfg);
    ASSERT_EQ(rows.size(), 6u);
    for (const BenchRecord& r : rows) {
        EXPECT_EQ(r.mode, "leaf");
        EXPECT_TRUE(r.n == 16 || r.n == 32);
        EXPECT_GT(r.build_ns_per_key, 0);
        EXPECT_GE(r.filter_acceptance_rate, 0);
        EXPECT_LE(r.filter_acceptance_rate, 1);
        EXPECT_GT(r.seed_bits_per_key, 0);
    }
}

TEST(Bench, FilterAcceptanceAtSixteen) {
    LeafBenchConfig cfg;
    cfg.sizes = {16};
    cfg.engines = {Engine::kBasic};
    cfg.leaves = 3000;
    const auto rows = run_leaf_bench(cfg);
    ASSERT_EQ(rows.size(), 1u);
    const double p = test::surjective_probability(16, 8);
    const double samples = rows[0].seeds_scanned * static_cast<double>(cfg.leaves);
    EXPECT_LT(std::abs(rows[0].filter_acceptance_rate - p), 3 * std::sqrt(p * (1 - p) / samples))
        << rows[0].filter_acceptance_rate;
}

TEST(Bench, RejectsInvalidSizes) {
    LeafBenchConfig cfg;
    cfg.sizes = {0};
    EXPECT_THROW((void)run_leaf_bench(cfg), std::invalid_argument);
    cfg.sizes = {129};
    EXPECT_THROW((void)run_leaf_bench(cfg), std::invalid_argument);
}

TEST(BuildAndQuery, ReportsSpaceAndVerifies) {
    const auto keys = generate_keys({.count = 20'000, .seed = 5});
    Mphf index;
    const BenchRecord built = run_build(keys, BuildConfig{}, index);
    EXPECT_EQ(built.mode, "build");
    EXPECT_EQ(built.keys, keys.size());
    EXPECT_NEAR(built.total_bits_per_key,
                built.seed_bits_per_key + built.retrieval_bits_per_key + built.offset_bits_per_key +
                    built.metadata_bits_per_key,
                1e-9);
    EXPECT_NO_THROW(verify_bijection(index, keys));
    const BenchRecord queried = run_query(index, keys, 1);
    EXPECT_EQ(queried.mode, "query");
    EXPECT_GT(queried.query_ns_per_key, 0);
}

TEST(BuildAndQuery, DetectsVerificationFailures) {
    const auto keys = generate_keys({.count = 5000, .seed = 6});
    Mphf index;
    (void)run_build(keys, BuildConfig{}, index);
    const auto other = generate_keys({.count = 5000, .seed = 7});
    EXPECT_THROW(verify_bijection(index, other), VerificationError);
    EXPECT_THROW((void)run_query(index, other, 1), VerificationError);
    EXPECT_THROW(verify_bijection(index, std::span{keys}.first(4999)), VerificationError);
}

}  // namespace bshash::cli
