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
#include <string_view>
#include <vector>

#include <bshash/elias_fano.hpp>
#include <bshash/hashing.hpp>
#include <bshash/leaf_codes.hpp>
#include <bshash/leaf_search.hpp>
#include <bshash/retrieval.hpp>

//! Bucketed minimal perfect hash function: keys are spread over ceil(N / leaf_size) buckets, each
//! bucket is solved as one leaf, and the choice bits of all leaves share one retrieval structure.
namespace bshash {

struct BuildConfig {
    //! Expected bucket size, 2..64.
    uint32_t leaf_size{32};
    Engine engine{Engine::kQuadSplit};
    //! First master hash seed tried; rebuilds continue with the following seeds.
    uint64_t global_seed{0};
    //! Golomb–Rice leaf codes instead of 64 bits per bucket.
    bool compact{true};
    uint32_t threads{1};
    uint64_t max_pair_code{kDefaultMaxPairCode};
    //! Seeds tried after the first before giving up.
    uint32_t max_rebuilds{16};
};

inline constexpr uint32_t kMinBucketLeafSize = 2;
inline constexpr uint32_t kMaxBucketLeafSize = 64;

struct BuildStats {
    SearchStats search;
    //! Full rebuilds, split by cause.
    uint32_t bucket_overflows{0};
    uint32_t leaf_failures{0};
    uint32_t retrieval_failures{0};
    uint64_t largest_bucket{0};
};

//! Exact bit counts per component of the serialized index. Select samples, which are rebuilt on load,
//! are counted with the component they index.
struct SpaceReport {
    uint64_t keys{0};
    uint64_t seed_bits{0};
    uint64_t retrieval_bits{0};
    uint64_t offset_bits{0};
    uint64_t metadata_bits{0};

    [[nodiscard]] uint64_t total_bits() const { return seed_bits + retrieval_bits + offset_bits + metadata_bits; }
    [[nodiscard]] double per_key(uint64_t bits) const {
        return keys == 0 ? 0.0 : static_cast<double>(bits) / static_cast<double>(keys);
    }
    [[nodiscard]] double total_bits_per_key() const { return per_key(total_bits()); }
};

class DuplicateKeyError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class BuildError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Mphf {
  public:
    static constexpr uint16_t kFormatVersion = 1;
    static constexpr std::string_view kMagic = "BSH1";

    Mphf() = default;

    static Mphf build(std::span<const std::string_view> keys, const BuildConfig& cfg, BuildStats* stats = nullptr);
    static Mphf build(std::span<const std::string> keys, const BuildConfig& cfg, BuildStats* stats = nullptr);

    //! Position in [0, N) of a key. Build-set keys get distinct positions; other keys get arbitrary ones.
    [[nodiscard]] uint64_t operator()(std::string_view key) const { return query(master_hash(key, global_seed_)); }

    [[nodiscard]] uint64_t query(const MasterHash& key) const;

    [[nodiscard]] uint64_t size() const { return keys_; }
    [[nodiscard]] uint64_t num_buckets() const { return buckets_; }
    [[nodiscard]] uint32_t leaf_size() const { return leaf_size_; }
    [[nodiscard]] Engine engine() const { return engine_; }
    [[nodiscard]] bool compact() const { return codes_.mode() == LeafCodes::Mode::kRice; }
    [[nodiscard]] uint64_t global_seed() const { return global_seed_; }
    [[nodiscard]] const LeafCodes& leaf_codes() const { return codes_; }

    [[nodiscard]] std::vector<std::byte> serialize() const;

    //! Throws FormatError on bad magic, unknown version, truncation, checksum mismatch, or
    //! inconsistent blocks.
    static Mphf deserialize(std::span<const std::byte> bytes);

    [[nodiscard]] SpaceReport space_report() const;

  private:
    uint64_t keys_{0};
    uint64_t buckets_{0};
    uint32_t leaf_size_{32};
    Engine engine_{Engine::kQuadSplit};
    uint64_t global_seed_{0};
    EliasFano offsets_;
    LeafCodes codes_;
    XorRetrieval retrieval_;
};

//! Checksum appended to a serialized index.
uint64_t index_checksum(std::span<const std::byte> bytes);

}  // namespace bshash
