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

#include "commands.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "key_file.hpp"

#ifndef BSHASH_VERSION_STRING
#define BSHASH_VERSION_STRING "unknown"
#endif

namespace bshash::cli {

namespace {

    using Clock = std::chrono::steady_clock;

    template <typename F>
    double time_ns(F&& f) {
        const auto start = Clock::now();
        f();
        return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
    }

    double median(std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t mid = v.size() / 2;
        return v.size() % 2 == 1 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
    }

    //! Keeps a computed value alive so timed loops are not optimized away.
    template <typename T>
    void keep(const T& value) {
        asm volatile("" : : "r"(&value) : "memory");
    }

    double ratio(double a, double b) { return b == 0 ? 0.0 : a / b; }

    std::string number(double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

}  // namespace

std::string_view version() { return BSHASH_VERSION_STRING; }

std::string csv_header() {
    return "version,mode,engine,n,N,threads,reps,build_ns_per_key,query_ns_per_key,hash_ns_per_key,"
           "seed_bits_per_key,retrieval_bits_per_key,offset_bits_per_key,metadata_bits_per_key,total_bits_per_key,"
           "filter_acceptance_rate,seeds_scanned,pairs_tested";
}

std::string to_csv(const BenchRecord& r) {
    std::ostringstream out;
    out << version() << ',' << r.mode << ',' << r.engine << ',' << r.n << ',' << r.keys << ',' << r.threads << ','
        << r.reps << ',' << number(r.build_ns_per_key) << ',' << number(r.query_ns_per_key) << ','
        << number(r.hash_ns_per_key) << ',' << number(r.seed_bits_per_key) << ','
        << number(r.retrieval_bits_per_key) << ',' << number(r.offset_bits_per_key) << ','
        << number(r.metadata_bits_per_key) << ',' << number(r.total_bits_per_key) << ','
        << number(r.filter_acceptance_rate) << ',' << number(r.seeds_scanned) << ',' << number(r.pairs_tested);
    return out.str();
}

std::vector<BenchRecord> run_leaf_bench(const LeafBenchConfig& cfg) {
    std::vector<BenchRecord> rows;
    const uint32_t reps = std::max<uint32_t>(1, cfg.reps);
    for (uint32_t n : cfg.sizes) {
        if (n < 1 || n > kMaxLeafSize) throw std::invalid_argument("bench: leaf size must be in [1, 128]");
        const uint64_t leaves = cfg.leaves != 0 ? cfg.leaves : (100000 + n - 1) / n;
        const auto strings = generate_keys({.count = leaves * n, .seed = cfg.seed});

        std::vector<MasterHash> hashes(strings.size());
        const double hash_ns = time_ns([&] {
            for (std::size_t i = 0; i < strings.size(); ++i) hashes[i] = master_hash(strings[i], 0);
        });

        for (Engine engine : cfg.engines) {
            const LeafConfig leaf{.size = n, .engine = engine, .max_pair_code = cfg.max_pair_code};
            std::vector<LeafDescriptor> found(leaves);
            SearchStats stats;
            std::vector<double> build_times;
            std::vector<double> query_times;
            for (uint32_t rep = 0; rep < reps; ++rep) {
                SearchStats run;
                build_times.push_back(time_ns([&] {
                    for (uint64_t l = 0; l < leaves; ++l) {
                        found[l] = find_seed(std::span{hashes}.subspan(l * n, n), leaf, &run);
                    }
                }));
                if (rep == 0) stats = run;

                uint64_t checksum = 0;
                query_times.push_back(time_ns([&] {
                    for (uint64_t l = 0; l < leaves; ++l) {
                        const DecodedLeaf decoded{found[l].code, n, engine};
                        for (uint32_t k = 0; k < n; ++k) checksum += decoded(hashes[l * n + k], found[l].bits[k]);
                    }
                }));
                if (checksum != static_cast<uint64_t>(leaves) * n * (n - 1) / 2) {
                    throw VerificationError("bench: leaf evaluation is not a bijection");
                }
            }

            double seed_bits = 0;
            for (const LeafDescriptor& d : found) seed_bits += std::bit_width(d.code);
            const auto total = static_cast<double>(leaves * n);
            BenchRecord r;
            r.mode = "leaf";
            r.engine = engine_name(engine);
            r.n = n;
            r.keys = leaves * n;
            r.reps = reps;
            r.build_ns_per_key = median(build_times) / total;
            r.query_ns_per_key = median(query_times) / total;
            r.hash_ns_per_key = hash_ns / total;
            r.seed_bits_per_key = seed_bits / total;
            r.total_bits_per_key = r.seed_bits_per_key;
            r.filter_acceptance_rate =
                ratio(static_cast<double>(stats.candidates_accepted), static_cast<double>(stats.candidates_examined));
            r.seeds_scanned = static_cast<double>(stats.seed_evaluations) / static_cast<double>(leaves);
            r.pairs_tested = static_cast<double>(stats.pairs_tested) / static_cast<double>(leaves);
            rows.push_back(r);
        }
    }
    return rows;
}

BenchRecord run_build(std::span<const std::string> keys, const BuildConfig& cfg, Mphf& index) {
    const auto total = static_cast<double>(std::max<std::size_t>(1, keys.size()));
    uint64_t sink = 0;
    const double hash_ns = time_ns([&] {
        for (const std::string& k : keys) sink += master_hash(k, cfg.global_seed).lo;
        keep(sink);
    });
    BuildStats stats;
    const double build_ns = time_ns([&] { index = Mphf::build(keys, cfg, &stats); });
    const SpaceReport space = index.space_report();

    BenchRecord r;
    r.mode = "build";
    r.engine = engine_name(cfg.engine);
    r.n = cfg.leaf_size;
    r.keys = keys.size();
    r.threads = cfg.threads;
    r.build_ns_per_key = build_ns / total;
    r.hash_ns_per_key = hash_ns / total;
    r.seed_bits_per_key = space.per_key(space.seed_bits);
    r.retrieval_bits_per_key = space.per_key(space.retrieval_bits);
    r.offset_bits_per_key = space.per_key(space.offset_bits);
    r.metadata_bits_per_key = space.per_key(space.metadata_bits);
    r.total_bits_per_key = space.total_bits_per_key();
    r.filter_acceptance_rate = ratio(static_cast<double>(stats.search.candidates_accepted),
                                     static_cast<double>(stats.search.candidates_examined));
    const auto buckets = static_cast<double>(std::max<uint64_t>(1, index.num_buckets()));
    r.seeds_scanned = static_cast<double>(stats.search.seed_evaluations) / buckets;
    r.pairs_tested = static_cast<double>(stats.search.pairs_tested) / buckets;
    return r;
}

void verify_bijection(const Mphf& index, std::span<const std::string> keys) {
    if (keys.size() != index.size()) {
        throw VerificationError("query: index holds " + std::to_string(index.size()) + " keys, key file has " +
                                std::to_string(keys.size()));
    }
    std::vector<uint64_t> owner(keys.size(), UINT64_MAX);
    for (uint64_t i = 0; i < keys.size(); ++i) {
        const uint64_t p = index(keys[i]);
        if (p >= keys.size()) {
            throw VerificationError("query: key #" + std::to_string(i) + " maps to " + std::to_string(p) +
                                    ", outside [0, " + std::to_string(keys.size()) + ")");
        }
        if (owner[p] != UINT64_MAX) {
            throw VerificationError("query: keys #" + std::to_string(owner[p]) + " and #" + std::to_string(i) +
                                    " both map to " + std::to_string(p));
        }
        owner[p] = i;
    }
}

BenchRecord run_query(const Mphf& index, std::span<const std::string> keys, uint32_t reps) {
    verify_bijection(index, keys);
    reps = std::max<uint32_t>(1, reps);
    const auto total = static_cast<double>(std::max<std::size_t>(1, keys.size()));

    std::vector<MasterHash> hashes(keys.size());
    const double hash_ns = time_ns([&] {
        for (std::size_t i = 0; i < keys.size(); ++i) hashes[i] = master_hash(keys[i], index.global_seed());
    });
    std::vector<double> times;
    uint64_t sink = 0;
    for (uint32_t rep = 0; rep < reps; ++rep) {
        times.push_back(time_ns([&] {
            for (const MasterHash& m : hashes) sink += index.query(m);
            keep(sink);
        }));
    }
    const SpaceReport space = index.space_report();

    BenchRecord r;
    r.mode = "query";
    r.engine = engine_name(index.engine());
    r.n = index.leaf_size();
    r.keys = keys.size();
    r.reps = reps;
    r.query_ns_per_key = median(times) / total;
    r.hash_ns_per_key = hash_ns / total;
    r.seed_bits_per_key = space.per_key(space.seed_bits);
    r.retrieval_bits_per_key = space.per_key(space.retrieval_bits);
    r.offset_bits_per_key = space.per_key(space.offset_bits);
    r.metadata_bits_per_key = space.per_key(space.metadata_bits);
    r.total_bits_per_key = space.total_bits_per_key();
    return r;
}

}  // namespace bshash::cli
