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

#include <bshash/leaf_search.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

#include <bshash/pairing.hpp>

namespace bshash {

namespace {

    using u128 = uint128;

    constexpr uint64_t low_mask(uint32_t bits) { return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1; }

    constexpr uint64_t rotate_within(uint64_t mask, uint32_t r, uint32_t width, uint64_t full) {
        if (r == 0) return mask;
        return ((mask << r) | (mask >> (width - r))) & full;
    }

    constexpr u128 triangle(uint64_t x) { return x == 0 ? 0 : u128{x} * (x - 1) / 2; }

    //! Largest newest-candidate code whose pairs can still fit the budget.
    uint64_t code_limit(uint64_t max_pair_code) {
        uint64_t lo = 1;
        uint64_t hi = pairing::kMaxInput;
        if (triangle(hi) <= max_pair_code) return hi;
        while (lo < hi) {
            const uint64_t mid = lo + (hi - lo + 1) / 2;
            if (triangle(mid) <= max_pair_code) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        return lo;
    }

    constexpr uint64_t szudzik(uint64_t x, uint64_t y) { return x < y ? y * y + x : x * x + x + y; }

    //! Keys in search order. The split engines put subset-0 keys first so candidate position arrays are a
    //! concatenation of the two subsets' arrays.
    struct LeafKeys {
        uint32_t size{0};
        uint32_t half{0};
        uint32_t subset0{0};
        std::array<uint64_t, kMaxLeafSize> lo{};
        std::array<uint8_t, kMaxLeafSize> original{};
    };

    LeafKeys arrange(std::span<const MasterHash> keys, bool split) {
        LeafKeys out;
        out.size = static_cast<uint32_t>(keys.size());
        out.half = half_range(out.size);
        uint32_t ones = 0;
        if (split) {
            for (const MasterHash& key : keys) ones += static_cast<uint32_t>(subset_bit(key));
        }
        out.subset0 = out.size - ones;
        // Stable partition: subset-0 keys keep their order at the front, subset-1 keys after them.
        uint32_t next0 = 0;
        uint32_t next1 = out.subset0;
        for (uint32_t k = 0; k < out.size; ++k) {
            const bool second = split && subset_bit(keys[k]);
            const uint32_t slot = second ? next1 : next0;
            next1 += second ? 1 : 0;
            next0 += second ? 0 : 1;
            out.lo[slot] = keys[k].lo;
            out.original[slot] = static_cast<uint8_t>(k);
        }
        return out;
    }

    void check_keys(std::span<const MasterHash> keys) {
        if (keys.size() > kMaxLeafSize) {
            throw std::invalid_argument("leaf search: " + std::to_string(keys.size()) + " keys exceed the leaf limit");
        }
        // Open addressing over 256 slots; slot value 0 marks an empty slot, so key k is stored as k + 1.
        std::array<uint8_t, 256> table{};
        for (std::size_t k = 0; k < keys.size(); ++k) {
            const uint64_t lo = keys[k].lo;
            auto slot = static_cast<uint8_t>(remix(lo) >> 56);
            while (table[slot] != 0) {
                if (keys[table[slot] - 1].lo == lo) {
                    // No seed can separate two keys with identical leaf hash input.
                    throw SearchBudgetExceeded("leaf search: keys are indistinguishable by the leaf hash");
                }
                ++slot;
            }
            table[slot] = static_cast<uint8_t>(k + 1);
        }
    }

    inline uint64_t hash_positions(const uint64_t* lo, uint32_t count, uint64_t seed, uint32_t half, uint8_t* out) {
        uint64_t coverage = 0;
        for (uint32_t k = 0; k < count; ++k) {
            const uint32_t p = leaf_hash_lo(lo[k], seed, half);
            out[k] = static_cast<uint8_t>(p);
            coverage |= uint64_t{1} << p;
        }
        return coverage;
    }

    KeyMask isolated_keys(const uint8_t* positions, uint32_t size) {
        uint64_t once = 0;
        uint64_t twice = 0;
        for (uint32_t k = 0; k < size; ++k) {
            const uint64_t bit = uint64_t{1} << positions[k];
            twice |= once & bit;
            once |= bit;
        }
        const uint64_t single = once & ~twice;
        uint64_t low = 0;
        uint64_t high = 0;
        for (uint32_t k = 0; k < size && k < 64; ++k) low |= ((single >> positions[k]) & 1) << k;
        for (uint32_t k = 64; k < size; ++k) high |= ((single >> positions[k]) & 1) << (k - 64);
        return (KeyMask{high} << 64) | low;
    }

    enum class Outcome { kStopped, kSeedLimit, kCodeLimit };

    // Candidate sinks are called as sink(code, positions, coverage) and return true to stop the stream.

    template <typename Sink>
    Outcome generate_basic(const LeafKeys& keys, bool filter, uint64_t seed_limit, uint64_t max_code,
                           SearchStats& stats, Sink&& sink) {
        const uint64_t full = low_mask(keys.half);
        std::array<uint8_t, kMaxLeafSize> positions{};
        for (uint64_t seed = 0;; ++seed) {
            if (seed >= seed_limit) return Outcome::kSeedLimit;
            if (seed > max_code) return Outcome::kCodeLimit;
            stats.seed_evaluations++;
            stats.candidates_examined++;
            const uint64_t coverage = hash_positions(keys.lo.data(), keys.size, seed, keys.half, positions.data());
            if (filter && coverage != full) continue;
            stats.candidates_accepted++;
            if (sink(seed, positions.data(), coverage)) return Outcome::kStopped;
        }
    }

    template <typename Sink>
    Outcome generate_rotation(const LeafKeys& keys, uint64_t seed_limit, uint64_t max_code, SearchStats& stats,
                              Sink&& sink) {
        const uint32_t half = keys.half;
        const uint32_t split = keys.subset0;
        const uint64_t full = low_mask(half);
        std::array<uint8_t, kMaxLeafSize> base{};
        std::array<uint8_t, kMaxLeafSize> rotated{};
        for (uint64_t seed = 0;; ++seed) {
            if (seed >= seed_limit) return Outcome::kSeedLimit;
            if (seed * half > max_code) return Outcome::kCodeLimit;
            stats.seed_evaluations++;
            stats.candidates_examined += half;
            const uint64_t cover_a = hash_positions(keys.lo.data(), split, seed, half, base.data());
            const uint64_t cover_b =
                hash_positions(keys.lo.data() + split, keys.size - split, seed, half, base.data() + split);
            if (static_cast<uint32_t>(std::popcount(cover_a) + std::popcount(cover_b)) < half) continue;

            bool copied = false;
            for (uint32_t r = 0; r < half; ++r) {
                const uint64_t coverage = cover_a | rotate_within(cover_b, r, half, full);
                if (coverage != full) continue;
                const uint64_t code = seed * half + r;
                if (code > max_code) return Outcome::kCodeLimit;
                stats.candidates_accepted++;
                if (!copied) {
                    std::memcpy(rotated.data(), base.data(), split);
                    copied = true;
                }
                for (uint32_t k = split; k < keys.size; ++k) {
                    const uint32_t p = base[k] + r;
                    rotated[k] = static_cast<uint8_t>(p >= half ? p - half : p);
                }
                if (sink(code, rotated.data(), coverage)) return Outcome::kStopped;
            }
        }
    }

    template <typename Sink>
    Outcome generate_quadsplit(const LeafKeys& keys, uint64_t seed_limit, uint64_t max_code, SearchStats& stats,
                               Sink&& sink) {
        const uint32_t half = keys.half;
        const uint32_t size_a = keys.subset0;
        const uint32_t size_b = keys.size - keys.subset0;
        const uint64_t full = low_mask(half);

        // Coverage patterns per seed and subset, each list terminated by an all-ones sentinel so the scan
        // loops below need no bounds check.
        std::vector<uint64_t> patterns_a{full};
        std::vector<uint64_t> patterns_b{full};
        std::vector<uint8_t> cache_a;
        std::vector<uint8_t> cache_b;
        patterns_a.reserve(64);
        patterns_b.reserve(64);
        cache_a.reserve(64 * std::size_t{size_a});
        cache_b.reserve(64 * std::size_t{size_b});
        std::array<uint8_t, kMaxLeafSize> combined{};

        auto emit = [&](uint64_t seed_a, uint64_t seed_b, uint64_t coverage) -> std::optional<Outcome> {
            const uint64_t code = szudzik(seed_a, seed_b);
            if (code > max_code) return Outcome::kCodeLimit;
            stats.candidates_accepted++;
            std::memcpy(combined.data(), cache_a.data() + seed_a * size_a, size_a);
            std::memcpy(combined.data() + size_a, cache_b.data() + seed_b * size_b, size_b);
            if (sink(code, combined.data(), coverage)) return Outcome::kStopped;
            return std::nullopt;
        };

        for (uint64_t seed = 0;; ++seed) {
            if (seed >= seed_limit) return Outcome::kSeedLimit;
            if (seed * seed > max_code) return Outcome::kCodeLimit;
            stats.seed_evaluations++;

            cache_a.resize((seed + 1) * size_a);
            cache_b.resize((seed + 1) * size_b);
            const uint64_t a = hash_positions(keys.lo.data(), size_a, seed, half, cache_a.data() + seed * size_a);
            const uint64_t b =
                hash_positions(keys.lo.data() + size_a, size_b, seed, half, cache_b.data() + seed * size_b);

            // Szudzik order inside shell `seed`: (x, seed) for x < seed, then (seed, y) for y <= seed.
            stats.candidates_examined += seed;
            {
                const uint64_t* list = patterns_a.data();
                for (uint64_t x = 0;; ++x) {
                    while ((list[x] | b) != full) ++x;
                    if (x == seed) break;
                    if (auto done = emit(x, seed, list[x] | b)) return *done;
                }
            }
            patterns_a.back() = a;
            patterns_a.push_back(full);
            patterns_b.back() = b;
            patterns_b.push_back(full);

            stats.candidates_examined += seed + 1;
            {
                const uint64_t* list = patterns_b.data();
                for (uint64_t y = 0;; ++y) {
                    while ((a | list[y]) != full) ++y;
                    if (y == seed + 1) break;
                    if (auto done = emit(seed, y, a | list[y])) return *done;
                }
            }
        }
    }

    template <typename Sink>
    Outcome generate(Engine engine, const LeafKeys& keys, const LeafConfig& cfg, uint64_t seed_limit, uint64_t max_code,
                     SearchStats& stats, Sink&& sink) {
        switch (engine) {
            case Engine::kBasic:
                return generate_basic(keys, cfg.surjectivity_filter, seed_limit, max_code, stats, sink);
            case Engine::kRotation:
                return generate_rotation(keys, seed_limit, max_code, stats, sink);
            case Engine::kQuadSplit:
                return generate_quadsplit(keys, seed_limit, max_code, stats, sink);
        }
        throw std::invalid_argument("leaf search: unknown engine");
    }

    //! Stored candidates and the all-pairs test against each new one.
    class CandidatePool {
      public:
        CandidatePool(const LeafKeys& keys, const LeafConfig& cfg) : keys_(keys), cfg_(cfg) {
            codes_.reserve(64);
            isolated_.reserve(64);
            if (cfg_.seed_cache) positions_.reserve(64 * std::size_t{keys.size});
        }

        //! Index of the first stored candidate forming an orientable pair with the new one, storing the new
        //! candidate when there is none.
        std::optional<std::size_t> offer(uint64_t code, const uint8_t* positions, SearchStats& stats) {
            const uint32_t n = keys_.size;
            const KeyMask isolated = cfg_.isolated_filter ? isolated_keys(positions, n) : KeyMask{0};
            const std::size_t stored = codes_.size();
            std::size_t checks = 0;
            std::array<uint8_t, kMaxLeafSize> scratch{};

            for (std::size_t i = 0; i < stored; ++i) {
                if ((isolated & isolated_[i]) != 0) continue;
                ++checks;
                const uint8_t* other = positions_of(i, scratch.data());
                if (!is_orientable(n, positions, other)) continue;

                const u128 pair_code = triangle(code) + codes_[i];
                if (pair_code > cfg_.max_pair_code) {
                    throw SearchBudgetExceeded("leaf search: pair code budget exhausted");
                }
                // Codes must invert exactly at query time; reject the pair otherwise.
                const auto back = pairing::try_unpair_triangular(static_cast<uint64_t>(pair_code));
                if (!back || back->x != code || back->y != codes_[i]) continue;
                stats.pairs_tested += i + 1;
                stats.orientability_checks += checks;
                return i;
            }
            stats.pairs_tested += stored;
            stats.orientability_checks += checks;

            codes_.push_back(code);
            isolated_.push_back(isolated);
            if (cfg_.seed_cache) positions_.insert(positions_.end(), positions, positions + n);
            return std::nullopt;
        }

        [[nodiscard]] uint64_t code(std::size_t i) const { return codes_[i]; }

        const uint8_t* positions_of(std::size_t i, uint8_t* scratch) const {
            if (cfg_.seed_cache) return positions_.data() + i * keys_.size;
            // Without the cache only the basic engine is allowed, so the code is the raw seed.
            hash_positions(keys_.lo.data(), keys_.size, codes_[i], keys_.half, scratch);
            return scratch;
        }

      private:
        const LeafKeys& keys_;
        const LeafConfig& cfg_;
        std::vector<uint64_t> codes_;
        std::vector<KeyMask> isolated_;
        std::vector<uint8_t> positions_;
    };

    void verify_descriptor(std::span<const MasterHash> keys, const LeafDescriptor& d, Engine engine) {
        const auto n = static_cast<uint32_t>(keys.size());
        const DecodedLeaf leaf{d.code, n, engine};
        KeyMask seen = 0;
        for (uint32_t k = 0; k < n; ++k) {
            const uint32_t pos = leaf(keys[k], d.bits[k]);
            if (pos >= n || ((seen >> pos) & 1) != 0) {
                throw std::logic_error("leaf search: descriptor does not evaluate to a bijection");
            }
            seen |= KeyMask{1} << pos;
        }
    }

    LeafDescriptor trivial_descriptor(std::size_t size) {
        return LeafDescriptor{.code = 0, .bits = OrientationBits{static_cast<uint32_t>(size)}};
    }

    LeafDescriptor search(std::span<const MasterHash> keys, const LeafConfig& cfg, Engine engine, SearchStats* stats) {
        check_keys(keys);
        if (keys.size() <= 1) return trivial_descriptor(keys.size());
        if (engine != Engine::kBasic && (!cfg.surjectivity_filter || !cfg.seed_cache)) {
            throw std::invalid_argument("leaf search: split engines require the surjectivity filter and seed cache");
        }

        const LeafKeys arranged = arrange(keys, engine != Engine::kBasic);
        const uint32_t n = arranged.size;
        SearchStats local;
        CandidatePool pool{arranged, cfg};

        std::optional<LeafDescriptor> result;
        auto sink = [&](uint64_t code, const uint8_t* positions, uint64_t) {
            const auto partner = pool.offer(code, positions, local);
            if (!partner) return false;

            std::array<uint8_t, kMaxLeafSize> scratch{};
            const uint8_t* other = pool.positions_of(*partner, scratch.data());
            const LeafGraph graph = LeafGraph::from_halves(std::span{positions, n}, std::span{other, n});
            const OrientationBits internal = orient(graph);

            LeafDescriptor d;
            d.code = static_cast<uint64_t>(triangle(code) + pool.code(*partner));
            d.bits = OrientationBits{n};
            for (uint32_t k = 0; k < n; ++k) d.bits.set(arranged.original[k], internal[k]);
            result = d;
            return true;
        };

        const Outcome outcome =
            generate(engine, arranged, cfg, UINT64_MAX, code_limit(cfg.max_pair_code), local, sink);
        if (stats) *stats += local;
        if (outcome != Outcome::kStopped || !result) {
            throw SearchBudgetExceeded("leaf search: no orientable pair within pair code " +
                                       std::to_string(cfg.max_pair_code));
        }
        verify_descriptor(keys, *result, engine);
        return *result;
    }

}  // namespace

std::string_view engine_name(Engine engine) {
    switch (engine) {
        case Engine::kBasic:
            return "basic";
        case Engine::kRotation:
            return "rotation";
        case Engine::kQuadSplit:
            return "quadsplit";
    }
    return "unknown";
}

std::optional<Engine> parse_engine(std::string_view name) {
    if (name == "basic") return Engine::kBasic;
    if (name == "rotation") return Engine::kRotation;
    if (name == "quadsplit") return Engine::kQuadSplit;
    return std::nullopt;
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
    seed_evaluations += o.seed_evaluations;
    candidates_examined += o.candidates_examined;
    candidates_accepted += o.candidates_accepted;
    pairs_tested += o.pairs_tested;
    orientability_checks += o.orientability_checks;
    return *this;
}

uint32_t candidate_position(const MasterHash& key, uint64_t candidate_code, uint32_t size, Engine engine) {
    const uint32_t half = half_range(size);
    switch (effective_engine(engine, size)) {
        case Engine::kBasic:
            return leaf_hash(key, candidate_code, half);
        case Engine::kRotation: {
            const uint64_t seed = candidate_code / half;
            const auto rotation = static_cast<uint32_t>(candidate_code % half);
            const uint32_t p = leaf_hash(key, seed, half);
            if (!subset_bit(key)) return p;
            const uint32_t shifted = p + rotation;
            return shifted >= half ? shifted - half : shifted;
        }
        case Engine::kQuadSplit: {
            const pairing::Coordinates seeds = pairing::unpair_szudzik(candidate_code);
            return leaf_hash(key, subset_bit(key) ? seeds.y : seeds.x, half);
        }
    }
    throw std::invalid_argument("candidate_position: unknown engine");
}

uint64_t coverage_mask(std::span<const MasterHash> keys, uint64_t candidate_code, const LeafConfig& cfg) {
    uint64_t coverage = 0;
    for (const MasterHash& key : keys) {
        coverage |= uint64_t{1} << candidate_position(key, candidate_code, cfg.size, cfg.engine);
    }
    return coverage;
}

SeedCandidate make_candidate(std::span<const MasterHash> keys, uint64_t candidate_code, const LeafConfig& cfg) {
    SeedCandidate c;
    c.code = candidate_code;
    const auto n = static_cast<uint32_t>(keys.size());
    for (uint32_t k = 0; k < n; ++k) {
        const uint32_t p = candidate_position(keys[k], candidate_code, cfg.size, cfg.engine);
        c.hash_bytes[k] = static_cast<uint8_t>(p);
        c.coverage_mask |= uint64_t{1} << p;
    }
    c.isolated_mask = isolated_keys(c.hash_bytes.data(), n);
    return c;
}

LeafDescriptor find_seed_basic(std::span<const MasterHash> keys, const LeafConfig& cfg, SearchStats* stats) {
    return search(keys, cfg, Engine::kBasic, stats);
}

LeafDescriptor find_seed_rotation(std::span<const MasterHash> keys, const LeafConfig& cfg, SearchStats* stats) {
    if (keys.size() < kMinSplitEngineSize) throw std::invalid_argument("find_seed_rotation: needs at least 4 keys");
    return search(keys, cfg, Engine::kRotation, stats);
}

LeafDescriptor find_seed_quadsplit(std::span<const MasterHash> keys, const LeafConfig& cfg, SearchStats* stats) {
    if (keys.size() < kMinSplitEngineSize) throw std::invalid_argument("find_seed_quadsplit: needs at least 4 keys");
    return search(keys, cfg, Engine::kQuadSplit, stats);
}

LeafDescriptor find_seed(std::span<const MasterHash> keys, const LeafConfig& cfg, SearchStats* stats) {
    return search(keys, cfg, effective_engine(cfg.engine, static_cast<uint32_t>(keys.size())), stats);
}

DecodedLeaf::DecodedLeaf(uint64_t leaf_code, uint32_t size, Engine engine)
    : size_(size), half_(half_range(size)), offset_(upper_offset(size)) {
    if (size <= 1) return;
    const pairing::Coordinates pair = pairing::unpair_triangular(leaf_code);
    const Engine effective = effective_engine(engine, size);
    for (int side = 0; side < 2; ++side) {
        const uint64_t code = side == 0 ? pair.x : pair.y;
        Side& s = sides_[side];
        s.engine = effective;
        switch (effective) {
            case Engine::kBasic:
                s.seed_a = code;
                break;
            case Engine::kRotation:
                s.seed_a = code / half_;
                s.rotation = static_cast<uint32_t>(code % half_);
                break;
            case Engine::kQuadSplit: {
                const pairing::Coordinates seeds = pairing::unpair_szudzik(code);
                s.seed_a = seeds.x;
                s.seed_b = seeds.y;
                break;
            }
        }
    }
}

uint32_t evaluate_leaf(const MasterHash& key, uint64_t leaf_code, bool bit, uint32_t size, Engine engine) {
    return DecodedLeaf{leaf_code, size, engine}(key, bit);
}

std::vector<SeedCandidate> collect_candidates(std::span<const MasterHash> keys, const LeafConfig& cfg,
                                              uint64_t seed_evaluations, SearchStats* stats) {
    check_keys(keys);
    const Engine engine = effective_engine(cfg.engine, static_cast<uint32_t>(keys.size()));
    const LeafKeys arranged = arrange(keys, engine != Engine::kBasic);
    const uint32_t n = arranged.size;
    std::vector<SeedCandidate> out;
    SearchStats local;
    auto sink = [&](uint64_t code, const uint8_t* positions, uint64_t coverage) {
        SeedCandidate c;
        c.code = code;
        c.coverage_mask = coverage;
        for (uint32_t k = 0; k < n; ++k) c.hash_bytes[arranged.original[k]] = positions[k];
        c.isolated_mask = isolated_keys(c.hash_bytes.data(), n);
        out.push_back(c);
        return false;
    };
    generate(engine, arranged, cfg, seed_evaluations, pairing::kMaxInput, local, sink);
    if (stats) *stats += local;
    return out;
}

}  // namespace bshash
