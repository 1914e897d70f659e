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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace bshash {

//! 128-bit code computed once per key. Every other hash value in the library is derived from it:
//!  - bucket_index consumes the top bits of `hi`
//!  - subset_bit is bit 0 of `hi`
//!  - leaf_hash consumes `lo` mixed with the seed
struct MasterHash {
    uint64_t hi{0};
    uint64_t lo{0};

    friend constexpr auto operator<=>(const MasterHash&, const MasterHash&) = default;
};

//! Unsigned 128-bit integer (GCC/Clang extension).
__extension__ typedef unsigned __int128 uint128;

//! Mixing constants are part of the serialized format: changing any of them requires a format version bump.
inline constexpr uint64_t kSeedStride = 0x9e3779b97f4a7c15ULL;

//! 64-bit finalizer (Stafford's 13th variant of the MurmurHash3 fmix64)
constexpr uint64_t remix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr uint64_t mul_high(uint64_t a, uint64_t b) {
    return static_cast<uint64_t>((static_cast<uint128>(a) * b) >> 64);
}

//! Maps a uniform 64-bit value to [0, range) by multiply-high.
constexpr uint64_t reduce(uint64_t x, uint64_t range) { return mul_high(x, range); }

//! MurmurHash3_x64_128 with a 64-bit seed.
MasterHash master_hash(std::span<const std::byte> key, uint64_t global_seed);

inline MasterHash master_hash(std::string_view key, uint64_t global_seed) {
    return master_hash(std::as_bytes(std::span{key.data(), key.size()}), global_seed);
}

//! Leaf-level hash of a key, uniform in [0, range) over seeds.
//! Works on `lo` only so the inner search loops can keep a flat array of 64-bit words.
constexpr uint32_t leaf_hash_lo(uint64_t lo, uint64_t seed, uint32_t range) {
    return static_cast<uint32_t>(reduce(remix(lo + seed * kSeedStride), range));
}

constexpr uint32_t leaf_hash(const MasterHash& m, uint64_t seed, uint32_t range) {
    return leaf_hash_lo(m.lo, seed, range);
}

//! Constant 1-bit hash splitting a leaf into the subsets used by rotation fitting and quad split.
constexpr bool subset_bit(const MasterHash& m) { return (m.hi & 1) != 0; }

constexpr uint64_t bucket_index(const MasterHash& m, uint64_t num_buckets) { return reduce(m.hi, num_buckets); }

}  // namespace bshash
