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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include <bshash/leaf_search.hpp>
#include <bshash/orientation.hpp>

namespace {

using namespace bshash;

std::vector<MasterHash> random_leaves(std::size_t keys, uint64_t seed) {
    std::mt19937_64 rng{seed};
    std::vector<MasterHash> out(keys);
    for (MasterHash& m : out) m = {rng(), rng()};
    return out;
}

//! Leaf search throughput; items are keys.
template <Engine E>
void BM_FindSeed(benchmark::State& state) {
    const auto n = static_cast<uint32_t>(state.range(0));
    constexpr std::size_t kLeaves = 256;
    const auto keys = random_leaves(kLeaves * n, 42);
    const LeafConfig cfg{.size = n, .engine = E, .max_pair_code = uint64_t{1} << 61};
    std::size_t leaf = 0;
    SearchStats stats;
    for (auto _ : state) {
        const auto d = find_seed(std::span{keys}.subspan(leaf * n, n), cfg, &stats);
        benchmark::DoNotOptimize(d.code);
        leaf = (leaf + 1) % kLeaves;
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * n);
    state.counters["pairs/leaf"] = benchmark::Counter(static_cast<double>(stats.pairs_tested) /
                                                      static_cast<double>(state.iterations()));
}

BENCHMARK_TEMPLATE(BM_FindSeed, Engine::kBasic)->DenseRange(8, 48, 8);
BENCHMARK_TEMPLATE(BM_FindSeed, Engine::kRotation)->DenseRange(8, 64, 8);
BENCHMARK_TEMPLATE(BM_FindSeed, Engine::kQuadSplit)->DenseRange(8, 64, 8)->Arg(80)->Arg(100);

void BM_IsOrientable(benchmark::State& state) {
    const auto n = static_cast<uint32_t>(state.range(0));
    const uint32_t half = half_range(n);
    std::mt19937_64 rng{7};
    constexpr std::size_t kGraphs = 1024;
    std::vector<uint8_t> lower(kGraphs * n);
    std::vector<uint8_t> upper(kGraphs * n);
    for (auto& p : lower) p = static_cast<uint8_t>(rng() % half);
    for (auto& p : upper) p = static_cast<uint8_t>(rng() % half);
    std::size_t g = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_orientable(n, &lower[g * n], &upper[g * n]));
        g = (g + 1) % kGraphs;
    }
}

BENCHMARK(BM_IsOrientable)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_EvaluateLeaf(benchmark::State& state) {
    const auto n = static_cast<uint32_t>(state.range(0));
    const auto keys = random_leaves(n, 3);
    const LeafDescriptor d = find_seed(keys, LeafConfig{.size = n});
    uint32_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_leaf(keys[k], d.code, d.bits[k], n, Engine::kQuadSplit));
        k = (k + 1) % n;
    }
}

BENCHMARK(BM_EvaluateLeaf)->Arg(16)->Arg(64);

}  // namespace
