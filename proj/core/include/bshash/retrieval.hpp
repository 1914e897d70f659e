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

#include <array>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <bshash/byte_io.hpp>
#include <bshash/hashing.hpp>

namespace bshash {

struct RetrievalEntry {
    MasterHash key;
    bool bit{false};
};

class RetrievalBuildError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! A static function from a key set to one bit. Queries on keys outside the build set return an
//! arbitrary bit.
template <typename R>
concept Retrieval = requires(const R& r, const MasterHash& key, ByteWriter& out, ByteReader& in,
                             std::span<const RetrievalEntry> entries) {
    { R::build(entries, uint64_t{0}) } -> std::same_as<R>;
    { r.query(key) } -> std::same_as<bool>;
    { r.size_in_bits() } -> std::convertible_to<uint64_t>;
    r.serialize(out);
    { R::deserialize(in) } -> std::same_as<R>;
};

//! XOR retrieval over a 3-uniform hypergraph: each key owns one slot in each of three equal blocks
//! of the table, and the XOR of its three slots is its bit. Built by peeling.
class XorRetrieval {
  public:
    //! Table slots per key before rounding; above the 3-hypergraph peeling threshold (about 1.222).
    static constexpr double kOverhead = 1.23;
    static constexpr uint32_t kSeedAttempts = 8;
    static constexpr uint32_t kGrowthAttempts = 8;

    XorRetrieval() = default;

    //! Throws RetrievalBuildError when no seed and table size within the retry budget peels, which
    //! happens with repeated keys.
    static XorRetrieval build(std::span<const RetrievalEntry> entries, uint64_t seed = 0);

    [[nodiscard]] bool query(const MasterHash& key) const {
        if (slots_ == 0) return false;
        const Slots s = slots_of(key, seed_, slots_ / 3);
        return (bit(s[0]) ^ bit(s[1]) ^ bit(s[2])) != 0;
    }

    //! Table size m.
    [[nodiscard]] uint64_t slots() const { return slots_; }
    [[nodiscard]] uint64_t seed() const { return seed_; }

    //! Table bits plus the two 64-bit header fields.
    [[nodiscard]] uint64_t size_in_bits() const { return slots_ + 128; }

    void serialize(ByteWriter& out) const;
    static XorRetrieval deserialize(ByteReader& in);

    friend bool operator==(const XorRetrieval&, const XorRetrieval&) = default;

  private:
    using Slots = std::array<uint64_t, 3>;

    //! Slot count for a key count: ceil(1.23 n) + 3, rounded up to a multiple of 3.
    static uint64_t table_size(uint64_t keys, uint32_t growth);

    static Slots slots_of(const MasterHash& key, uint64_t seed, uint64_t block) {
        const uint64_t base = remix(key.lo ^ remix(key.hi + seed * kSeedStride));
        return {reduce(remix(base + 1 * kSeedStride), block), block + reduce(remix(base + 2 * kSeedStride), block),
                2 * block + reduce(remix(base + 3 * kSeedStride), block)};
    }

    [[nodiscard]] uint64_t bit(uint64_t slot) const { return (table_[slot / 64] >> (slot % 64)) & 1; }

    static bool try_build(std::span<const RetrievalEntry> entries, uint64_t seed, uint64_t slots,
                          std::vector<uint64_t>& table);

    uint64_t slots_{0};
    uint64_t seed_{0};
    std::vector<uint64_t> table_;
};

static_assert(Retrieval<XorRetrieval>);

}  // namespace bshash
