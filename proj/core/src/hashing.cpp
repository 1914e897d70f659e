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

#include <bshash/hashing.hpp>

#include <bit>
#include <cstring>

namespace bshash {

namespace {

    constexpr uint64_t kC1 = 0x87c37b91114253d5ULL;
    constexpr uint64_t kC2 = 0x4cf5ad432745937fULL;

    inline uint64_t load_le64(const std::byte* p) {
        uint64_t v;
        std::memcpy(&v, p, sizeof(v));
        if constexpr (std::endian::native == std::endian::big) {
            v = __builtin_bswap64(v);
        }
        return v;
    }

    constexpr uint64_t fmix64(uint64_t k) {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        k *= 0xc4ceb9fe1a85ec53ULL;
        k ^= k >> 33;
        return k;
    }

}  // namespace

MasterHash master_hash(std::span<const std::byte> key, uint64_t global_seed) {
    const std::size_t len = key.size();
    const std::size_t nblocks = len / 16;
    const std::byte* data = key.data();

    // Both lanes start from the seed; the second is pre-mixed so that the full 64 seed bits matter.
    uint64_t h1 = global_seed;
    uint64_t h2 = remix(global_seed ^ kC1);

    for (std::size_t i = 0; i < nblocks; ++i) {
        uint64_t k1 = load_le64(data + i * 16);
        uint64_t k2 = load_le64(data + i * 16 + 8);

        k1 *= kC1;
        k1 = std::rotl(k1, 31);
        k1 *= kC2;
        h1 ^= k1;
        h1 = std::rotl(h1, 27);
        h1 += h2;
        h1 = h1 * 5 + 0x52dce729;

        k2 *= kC2;
        k2 = std::rotl(k2, 33);
        k2 *= kC1;
        h2 ^= k2;
        h2 = std::rotl(h2, 31);
        h2 += h1;
        h2 = h2 * 5 + 0x38495ab5;
    }

    const std::byte* tail = data + nblocks * 16;
    uint64_t k1 = 0;
    uint64_t k2 = 0;
    const std::size_t rem = len & 15;
    for (std::size_t i = rem; i > 8; --i) {
        k2 ^= static_cast<uint64_t>(tail[i - 1]) << ((i - 9) * 8);
    }
    if (rem > 8) {
        k2 *= kC2;
        k2 = std::rotl(k2, 33);
        k2 *= kC1;
        h2 ^= k2;
    }
    for (std::size_t i = rem < 8 ? rem : 8; i > 0; --i) {
        k1 ^= static_cast<uint64_t>(tail[i - 1]) << ((i - 1) * 8);
    }
    if (rem > 0) {
        k1 *= kC1;
        k1 = std::rotl(k1, 31);
        k1 *= kC2;
        h1 ^= k1;
    }

    h1 ^= len;
    h2 ^= len;
    h1 += h2;
    h2 += h1;
    h1 = fmix64(h1);
    h2 = fmix64(h2);
    h1 += h2;
    h2 += h1;

    return MasterHash{.hi = h1, .lo = h2};
}

}  // namespace bshash
