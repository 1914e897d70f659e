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
#include <string>

namespace bshash {

uint64_t XorRetrieval::table_size(uint64_t keys, uint32_t growth) {
    double factor = kOverhead;
    for (uint32_t g = 0; g < growth; ++g) factor *= 1.05;
    const auto slots = static_cast<uint64_t>(std::ceil(factor * static_cast<double>(keys))) + 3;
    return (slots + 2) / 3 * 3;
}

bool XorRetrieval::try_build(std::span<const RetrievalEntry> entries, uint64_t seed, uint64_t slots,
                             std::vector<uint64_t>& table) {
    const uint64_t block = slots / 3;
    const auto n = static_cast<uint32_t>(entries.size());

    std::vector<std::array<uint32_t, 3>> edges(n);
    std::vector<uint32_t> degree(slots, 0);
    std::vector<uint32_t> incident_xor(slots, 0);
    for (uint32_t e = 0; e < n; ++e) {
        const Slots s = slots_of(entries[e].key, seed, block);
        for (int j = 0; j < 3; ++j) {
            edges[e][j] = static_cast<uint32_t>(s[j]);
            degree[s[j]]++;
            incident_xor[s[j]] ^= e;
        }
    }

    // Peel slots of degree 1; `order` lists (edge, slot) pairs in peeling order.
    std::vector<std::pair<uint32_t, uint32_t>> order;
    order.reserve(n);
    std::vector<uint32_t> stack;
    for (uint64_t s = 0; s < slots; ++s) {
        if (degree[s] == 1) stack.push_back(static_cast<uint32_t>(s));
    }
    while (!stack.empty()) {
        const uint32_t s = stack.back();
        stack.pop_back();
        if (degree[s] != 1) continue;
        const uint32_t e = incident_xor[s];
        order.emplace_back(e, s);
        for (uint32_t t : edges[e]) {
            degree[t]--;
            incident_xor[t] ^= e;
            if (degree[t] == 1) stack.push_back(t);
        }
    }
    if (order.size() != n) return false;

    // Unconstrained slots get pseudo-random bits so that keys outside the build set see fair coins.
    table.assign((slots + 63) / 64, 0);
    for (uint64_t w = 0; w < table.size(); ++w) table[w] = remix(seed * kSeedStride ^ remix(w + 1));
    if (slots % 64 != 0) table.back() &= (uint64_t{1} << (slots % 64)) - 1;

    auto get = [&](uint64_t slot) { return (table[slot / 64] >> (slot % 64)) & 1; };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto [e, s] = *it;
        const auto& slot = edges[e];
        const uint64_t current = get(slot[0]) ^ get(slot[1]) ^ get(slot[2]);
        if (current != static_cast<uint64_t>(entries[e].bit)) table[s / 64] ^= uint64_t{1} << (s % 64);
    }
    return true;
}

XorRetrieval XorRetrieval::build(std::span<const RetrievalEntry> entries, uint64_t seed) {
    XorRetrieval r;
    if (entries.empty()) return r;
    if (entries.size() >= (uint64_t{1} << 31)) throw RetrievalBuildError("retrieval: too many entries");
    for (uint32_t growth = 0; growth <= kGrowthAttempts; ++growth) {
        const uint64_t slots = table_size(entries.size(), growth);
        for (uint32_t attempt = 0; attempt < kSeedAttempts; ++attempt) {
            const uint64_t s = seed + growth * kSeedAttempts + attempt;
            if (try_build(entries, s, slots, r.table_)) {
                r.slots_ = slots;
                r.seed_ = s;
                return r;
            }
        }
    }
    throw RetrievalBuildError("retrieval: peeling failed for " + std::to_string(entries.size()) +
                              " entries; keys are probably repeated");
}

void XorRetrieval::serialize(ByteWriter& out) const {
    out.put_u64(slots_);
    out.put_u64(seed_);
    out.put_bits(table_, slots_);
}

XorRetrieval XorRetrieval::deserialize(ByteReader& in) {
    XorRetrieval r;
    r.slots_ = in.get_u64();
    r.seed_ = in.get_u64();
    if (r.slots_ % 3 != 0 || r.slots_ / 8 > in.remaining()) throw FormatError("retrieval: invalid table size");
    r.table_ = in.get_bits(r.slots_);
    return r;
}

}  // namespace bshash
