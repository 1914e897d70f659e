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

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <bshash/leaf_search.hpp>
#include <bshash/mphf.hpp>

namespace bshash::cli {

//! Version string embedded in every CSV row (git describe at configure time).
std::string_view version();

//! One CSV row. Per-leaf counters are means over the leaves (or buckets) of the run.
struct BenchRecord {
    std::string mode;  // "leaf", "build" or "query"
    std::string engine;
    uint32_t n{0};
    uint64_t keys{0};
    uint32_t threads{1};
    uint32_t reps{1};
    double build_ns_per_key{0};
    double query_ns_per_key{0};
    double hash_ns_per_key{0};
    double seed_bits_per_key{0};
    double retrieval_bits_per_key{0};
    double offset_bits_per_key{0};
    double metadata_bits_per_key{0};
    double total_bits_per_key{0};
    double filter_acceptance_rate{0};
    double seeds_scanned{0};
    double pairs_tested{0};
};

std::string csv_header();
std::string to_csv(const BenchRecord& r);

class VerificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct LeafBenchConfig {
    std::vector<uint32_t> sizes{16, 32};
    std::vector<Engine> engines{Engine::kBasic, Engine::kRotation, Engine::kQuadSplit};
    uint32_t reps{1};
    //! Leaves per (n, engine); 0 picks ceil(100000 / n).
    uint64_t leaves{0};
    uint64_t seed{0};
    //! Large enough that the search never gives up at n <= 128.
    uint64_t max_pair_code{uint64_t{1} << 61};
};

//! Leaf-only microbenchmark: one row per (n, engine). Leaves are cut from generated keys, so every
//! engine sees the same leaves. Timings are medians over the repetitions.
std::vector<BenchRecord> run_leaf_bench(const LeafBenchConfig& cfg);

//! Builds an index and reports its build time and space.
BenchRecord run_build(std::span<const std::string> keys, const BuildConfig& cfg, Mphf& index);

//! Checks that the index maps the keys bijectively onto [0, N), then times queries.
BenchRecord run_query(const Mphf& index, std::span<const std::string> keys, uint32_t reps);

void verify_bijection(const Mphf& index, std::span<const std::string> keys);

}  // namespace bshash::cli
