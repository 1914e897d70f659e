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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>

#include "commands.hpp"
#include "key_file.hpp"

namespace {

bshash::Engine to_engine(const std::string& name) {
    if (auto e = bshash::parse_engine(name)) return *e;
    throw CLI::ValidationError("--engine", "unknown engine '" + name + "'");
}

const CLI::IsMember kEngines{std::vector<std::string>{"basic", "rotation", "quadsplit"}};

}  // namespace

int main(int argc, char** argv) {
    using namespace bshash;
    CLI::App app{"Bipartite ShockHash minimal perfect hashing"};
    app.set_version_flag("--version", std::string{cli::version()});
    app.require_subcommand(1);

    // genkeys
    cli::KeyGenConfig gen;
    std::string gen_out;
    auto* genkeys = app.add_subcommand("genkeys", "Write distinct random keys to a key file");
    genkeys->add_option("--count", gen.count, "Number of keys")->required();
    genkeys->add_option("--min-len", gen.min_len, "Minimum key length")->capture_default_str();
    genkeys->add_option("--max-len", gen.max_len, "Maximum key length")->capture_default_str();
    genkeys->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    genkeys->add_option("--out", gen_out, "Key file to write")->required();

    // build
    BuildConfig build_cfg;
    std::string build_keys;
    std::string build_out;
    std::string build_engine = "quadsplit";
    bool compact = true;
    auto* build = app.add_subcommand("build", "Build an index from a key file and print its space as CSV");
    build->add_option("--keys", build_keys, "Key file")->required()->check(CLI::ExistingFile);
    build->add_option("--out", build_out, "Index file to write")->required();
    build->add_option("--leaf-size", build_cfg.leaf_size, "Expected bucket size")
        ->check(CLI::Range(kMinBucketLeafSize, kMaxBucketLeafSize))
        ->capture_default_str();
    build->add_option("--engine", build_engine, "Leaf search engine")->check(kEngines)->capture_default_str();
    build->add_option("--seed", build_cfg.global_seed, "Global seed")->capture_default_str();
    build->add_option("--compact", compact, "Golomb-Rice coded leaf codes (else 64 bits each)")
        ->capture_default_str();
    build->add_option("--threads", build_cfg.threads, "Threads for bucket construction")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // query
    std::string query_index;
    std::string query_keys;
    uint32_t query_reps = 3;
    auto* query = app.add_subcommand("query", "Verify an index against its key file and time queries");
    query->add_option("--index", query_index, "Index file")->required()->check(CLI::ExistingFile);
    query->add_option("--keys", query_keys, "Key file")->required()->check(CLI::ExistingFile);
    query->add_option("--reps", query_reps, "Timed repetitions")->check(CLI::PositiveNumber)->capture_default_str();

    // bench
    cli::LeafBenchConfig bench_cfg;
    std::vector<std::string> bench_engines{"basic", "rotation", "quadsplit"};
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Leaf-only search benchmark, one CSV row per (n, engine)");
    bench->add_option("--leaf-size", bench_cfg.sizes, "Leaf sizes")
        ->delimiter(',')
        ->check(CLI::Range(1u, kMaxLeafSize))
        ->capture_default_str();
    bench->add_option("--engine", bench_engines, "Engines")->delimiter(',')->check(kEngines)->capture_default_str();
    bench->add_option("--reps", bench_cfg.reps, "Timed repetitions")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--leaves", bench_cfg.leaves, "Leaves per configuration (0: ceil(100000 / n))")
        ->capture_default_str();
    bench->add_option("--seed", bench_cfg.seed, "Key generation seed")->capture_default_str();
    bench->add_option("--out", bench_out, "CSV file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*genkeys) {
            const auto keys = cli::generate_keys(gen);
            cli::write_key_file(gen_out, keys);
            std::cerr << "wrote " << keys.size() << " keys to " << gen_out << '\n';
        } else if (*build) {
            build_cfg.engine = to_engine(build_engine);
            build_cfg.compact = compact;
            const auto keys = cli::read_key_file(build_keys);
            Mphf index;
            const cli::BenchRecord row = cli::run_build(keys, build_cfg, index);
            cli::write_file(build_out, index.serialize());
            std::cout << cli::csv_header() << '\n' << cli::to_csv(row) << '\n';
        } else if (*query) {
            const Mphf index = Mphf::deserialize(cli::read_file(query_index));
            const auto keys = cli::read_key_file(query_keys);
            const cli::BenchRecord row = cli::run_query(index, keys, query_reps);
            std::cerr << "verified bijection over " << keys.size() << " keys\n";
            std::cout << cli::csv_header() << '\n' << cli::to_csv(row) << '\n';
        } else if (*bench) {
            bench_cfg.engines.clear();
            for (const std::string& e : bench_engines) bench_cfg.engines.push_back(to_engine(e));
            const auto rows = cli::run_leaf_bench(bench_cfg);
            std::string csv = cli::csv_header() + '\n';
            for (const auto& row : rows) csv += cli::to_csv(row) + '\n';
            if (bench_out.empty()) {
                std::cout << csv;
            } else {
                cli::write_file(bench_out, std::as_bytes(std::span{csv.data(), csv.size()}));
            }
        }
    } catch (const cli::VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
