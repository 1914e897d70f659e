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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <bshash/hashing.hpp>
#include <bshash/orientation.hpp>

//! Bipartite seed search for a single leaf of at most 128 keys.
//!
//! Every engine produces a stream of *candidates*: hash functions from the leaf's keys onto
//! [0, ceil(n/2)) that hit every position. Each new candidate c0 is paired with all previously stored
//! candidates c1 < c0; the pair succeeds when the bipartite graph with edges (h_c0(x), offset + h_c1(x))
//! is orientable. The winning pair is stored as pair_triangular(c0, c1), the orientation as one bit per key.
//!
//! Engines differ in how candidate codes map to hash functions:
//!  - basic:     code = seed, every key uses h_seed
//!  - rotation:  code = seed * ceil(n/2) + r, keys with subset_bit = 1 are rotated by r (mod ceil(n/2))
//!  - quadsplit: code = pair_szudzik(seed_a, seed_b), keys use seed_a or seed_b according to subset_bit
namespace bshash {

enum class Engine : uint8_t {
    kBasic = 0,
    kRotation = 1,
    kQuadSplit = 2,
};

std::string_view engine_name(Engine engine);
std::optional<Engine> parse_engine(std::string_view name);

//! Search budget: pair codes above this value are never tried.
inline constexpr uint64_t kDefaultMaxPairCode = uint64_t{1} << 44;

//! Rotation fitting and quad split need both subsets to be meaningful.
inline constexpr uint32_t kMinSplitEngineSize = 4;

struct LeafConfig {
    uint32_t size{0};
    Engine engine{Engine::kQuadSplit};
    bool isolated_filter{true};
    //! Only the basic engine can run without these two; the split engines depend on them.
    bool surjectivity_filter{true};
    bool seed_cache{true};
    uint64_t max_pair_code{kDefaultMaxPairCode};
};

//! Engine actually run for a leaf of the given size (split engines fall back to basic below 4 keys).
constexpr Engine effective_engine(Engine engine, uint32_t size) {
    return size < kMinSplitEngineSize ? Engine::kBasic : engine;
}

struct SearchStats {
    //! Hash function evaluations over a full key set (quad split counts one per seed shell).
    uint64_t seed_evaluations{0};
    //! Candidate codes checked for surjectivity.
    uint64_t candidates_examined{0};
    //! Candidate codes that passed the surjectivity filter.
    uint64_t candidates_accepted{0};
    //! Candidate pairs considered.
    uint64_t pairs_tested{0};
    //! Pairs that survived the isolated-key filter and ran the full orientability check.
    uint64_t orientability_checks{0};

    SearchStats& operator+=(const SearchStats& o);
};

struct SeedCandidate {
    uint64_t code{0};
    //! Position in [0, ceil(n/2)) of every key.
    std::array<uint8_t, kMaxLeafSize> hash_bytes{};
    //! Bit p set iff some key maps to p.
    uint64_t coverage_mask{0};
    //! Bit k set iff key k is the only key at its position.
    KeyMask isolated_mask{0};
};

struct LeafDescriptor {
    //! pair_triangular(c0, c1) with c1 < c0; 0 for leaves with fewer than two keys.
    uint64_t code{0};
    OrientationBits bits;
};

class SearchBudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! Position in [0, ceil(size/2)) of a key under one candidate code of the given engine.
uint32_t candidate_position(const MasterHash& key, uint64_t candidate_code, uint32_t size, Engine engine);

uint64_t coverage_mask(std::span<const MasterHash> keys, uint64_t candidate_code, const LeafConfig& cfg);

SeedCandidate make_candidate(std::span<const MasterHash> keys, uint64_t candidate_code, const LeafConfig& cfg);

//! False if some key is isolated under both candidates: that key would form a two-node, one-edge component.
inline bool isolated_filter(const SeedCandidate& a, const SeedCandidate& b) {
    return (a.isolated_mask & b.isolated_mask) == 0;
}

LeafDescriptor find_seed_basic(std::span<const MasterHash> keys, const LeafConfig& cfg, SearchStats* stats = nullptr);
LeafDescriptor find_seed_rotation(std::span<const MasterHash> keys, const LeafConfig& cfg,
                                  SearchStats* stats = nullptr);
LeafDescriptor find_seed_quadsplit(std::span<const MasterHash> keys, const LeafConfig& cfg,
                                   SearchStats* stats = nullptr);

//! Dispatches on effective_engine(cfg.engine, keys.size()). Throws SearchBudgetExceeded when no pair
//! code up to cfg.max_pair_code works.
LeafDescriptor find_seed(std::span<const MasterHash> keys, const LeafConfig& cfg, SearchStats* stats = nullptr);

//! A leaf code unpacked once for evaluating many keys.
class DecodedLeaf {
  public:
    DecodedLeaf(uint64_t leaf_code, uint32_t size, Engine engine);

    //! Output position in [0, size) of a key with the given choice bit.
    [[nodiscard]] uint32_t operator()(const MasterHash& key, bool bit) const {
        if (size_ <= 1) return 0;
        const Side& s = sides_[bit ? 1 : 0];
        const uint32_t p = s.position(key, half_);
        return bit ? offset_ + p : p;
    }

  private:
    //! One candidate: basic uses seed_a only, rotation seed_a plus `rotation`, quad split picks by subset bit.
    struct Side {
        uint64_t seed_a{0};
        uint64_t seed_b{0};
        uint32_t rotation{0};
        Engine engine{Engine::kBasic};

        [[nodiscard]] uint32_t position(const MasterHash& key, uint32_t half) const {
            switch (engine) {
                case Engine::kBasic:
                    return leaf_hash(key, seed_a, half);
                case Engine::kRotation: {
                    const uint32_t p = leaf_hash(key, seed_a, half);
                    if (!subset_bit(key)) return p;
                    const uint32_t shifted = p + rotation;
                    return shifted >= half ? shifted - half : shifted;
                }
                case Engine::kQuadSplit:
                    return leaf_hash(key, subset_bit(key) ? seed_b : seed_a, half);
            }
            return 0;
        }
    };

    uint32_t size_{0};
    uint32_t half_{0};
    uint32_t offset_{0};
    std::array<Side, 2> sides_{};
};

//! Output position in [0, size) of a key of a built leaf.
uint32_t evaluate_leaf(const MasterHash& key, uint64_t leaf_code, bool bit, uint32_t size, Engine engine);

//! Surjective candidates in stream order, produced by at most `seed_evaluations` hash function
//! evaluations. Statistics and test hook; with the surjectivity filter off (basic engine), every seed is
//! returned.
std::vector<SeedCandidate> collect_candidates(std::span<const MasterHash> keys, const LeafConfig& cfg,
                                              uint64_t seed_evaluations, SearchStats* stats = nullptr);

}  // namespace bshash
