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

#include <bshash/mphf.hpp>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

namespace bshash {

namespace {

    // Header: magic, version, leaf size, engine, compact flag, N, bucket count, global seed.
    constexpr uint64_t kHeaderBytes = 4 + 2 + 2 + 1 + 1 + 8 + 8 + 8;
    // Two block length prefixes and the trailing checksum.
    constexpr uint64_t kFramingBytes = 8 + 8 + 8;

    //! Keys grouped by bucket, each bucket sorted by master hash.
    struct Buckets {
        std::vector<uint64_t> offsets;
        std::vector<MasterHash> keys;
    };

    enum class Failure { kNone, kOverflow, kLeaf, kRetrieval };

    //! Counting sort into buckets; false on a bucket larger than a leaf can hold.
    bool distribute(std::span<const MasterHash> hashes, uint64_t num_buckets, Buckets& out, uint64_t& largest) {
        out.offsets.assign(num_buckets + 1, 0);
        for (const MasterHash& m : hashes) out.offsets[bucket_index(m, num_buckets) + 1]++;
        largest = 0;
        for (uint64_t b = 0; b < num_buckets; ++b) {
            largest = std::max(largest, out.offsets[b + 1]);
            out.offsets[b + 1] += out.offsets[b];
        }
        if (largest > kMaxLeafSize) return false;
        out.keys.resize(hashes.size());
        std::vector<uint64_t> fill(out.offsets.begin(), out.offsets.end() - 1);
        for (const MasterHash& m : hashes) out.keys[fill[bucket_index(m, num_buckets)]++] = m;
        for (uint64_t b = 0; b < num_buckets; ++b) {
            auto first = out.keys.begin() + static_cast<std::ptrdiff_t>(out.offsets[b]);
            auto last = out.keys.begin() + static_cast<std::ptrdiff_t>(out.offsets[b + 1]);
            std::sort(first, last);
            if (std::adjacent_find(first, last) != last) {
                throw DuplicateKeyError("mphf build: duplicate keys (identical master hashes)");
            }
        }
        return true;
    }

    //! Runs the leaf search of every bucket; buckets are handed out in chunks and results land in
    //! bucket order, so the output does not depend on the thread count.
    bool solve_buckets(const Buckets& buckets, const BuildConfig& cfg, std::vector<LeafDescriptor>& leaves,
                       SearchStats& stats) {
        const uint64_t num_buckets = buckets.offsets.size() - 1;
        leaves.assign(num_buckets, LeafDescriptor{});
        constexpr uint64_t kChunk = 64;
        std::atomic<uint64_t> next{0};
        std::atomic<bool> failed{false};
        std::mutex merge;
        std::exception_ptr error;

        auto worker = [&] {
            SearchStats local;
            try {
                while (!failed.load(std::memory_order_relaxed)) {
                    const uint64_t begin = next.fetch_add(kChunk);
                    if (begin >= num_buckets) break;
                    const uint64_t end = std::min(begin + kChunk, num_buckets);
                    for (uint64_t b = begin; b < end; ++b) {
                        const uint64_t lo = buckets.offsets[b];
                        const auto size = static_cast<uint32_t>(buckets.offsets[b + 1] - lo);
                        if (size <= 1) continue;
                        LeafConfig leaf{.size = size, .engine = cfg.engine, .max_pair_code = cfg.max_pair_code};
                        leaves[b] = find_seed(std::span{buckets.keys}.subspan(lo, size), leaf, &local);
                    }
                }
            } catch (const SearchBudgetExceeded&) {
                failed = true;
            } catch (...) {
                failed = true;
                std::lock_guard lock{merge};
                if (!error) error = std::current_exception();
            }
            std::lock_guard lock{merge};
            stats += local;
        };

        const uint32_t threads = std::max<uint32_t>(1, cfg.threads);
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (uint32_t t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        if (error) std::rethrow_exception(error);
        return !failed;
    }

    Mphf build_impl(std::span<const std::string_view> keys, const BuildConfig& cfg, BuildStats* stats,
                    Mphf (*assemble)(uint64_t, const BuildConfig&, uint64_t, std::vector<uint64_t>&&,
                                     std::vector<uint64_t>&&, XorRetrieval&&)) {
        if (cfg.leaf_size < kMinBucketLeafSize || cfg.leaf_size > kMaxBucketLeafSize) {
            throw std::invalid_argument("mphf build: leaf size must be in [2, 64], got " +
                                        std::to_string(cfg.leaf_size));
        }
        if (!parse_engine(engine_name(cfg.engine))) throw std::invalid_argument("mphf build: unknown engine");

        const uint64_t n = keys.size();
        const uint64_t num_buckets = (n + cfg.leaf_size - 1) / cfg.leaf_size;
        BuildStats local;
        std::vector<MasterHash> hashes(n);
        Buckets buckets;
        std::vector<LeafDescriptor> leaves;

        for (uint32_t attempt = 0; attempt <= cfg.max_rebuilds; ++attempt) {
            const uint64_t seed = cfg.global_seed + attempt;
            for (uint64_t i = 0; i < n; ++i) hashes[i] = master_hash(keys[i], seed);

            uint64_t largest = 0;
            if (!distribute(hashes, num_buckets, buckets, largest)) {
                local.bucket_overflows++;
                continue;
            }
            local.largest_bucket = largest;
            if (!solve_buckets(buckets, cfg, leaves, local.search)) {
                local.leaf_failures++;
                continue;
            }

            std::vector<RetrievalEntry> entries;
            entries.reserve(n);
            std::vector<uint64_t> codes(num_buckets, 0);
            for (uint64_t b = 0; b < num_buckets; ++b) {
                const uint64_t lo = buckets.offsets[b];
                const uint64_t size = buckets.offsets[b + 1] - lo;
                codes[b] = leaves[b].code;
                if (size <= 1) continue;
                for (uint64_t k = 0; k < size; ++k) {
                    entries.push_back({buckets.keys[lo + k], leaves[b].bits[static_cast<uint32_t>(k)]});
                }
            }
            XorRetrieval retrieval;
            try {
                retrieval = XorRetrieval::build(entries, remix(seed));
            } catch (const RetrievalBuildError&) {
                local.retrieval_failures++;
                continue;
            }
            if (stats) *stats = local;
            return assemble(n, cfg, seed, std::move(buckets.offsets), std::move(codes), std::move(retrieval));
        }
        if (stats) *stats = local;
        throw BuildError("mphf build: no global seed within the rebuild budget succeeded");
    }

}  // namespace

uint64_t index_checksum(std::span<const std::byte> bytes) { return master_hash(bytes, 0).lo; }

Mphf Mphf::build(std::span<const std::string_view> keys, const BuildConfig& cfg, BuildStats* stats) {
    return build_impl(
        keys, cfg, stats,
        [](uint64_t n, const BuildConfig& c, uint64_t seed, std::vector<uint64_t>&& offsets,
           std::vector<uint64_t>&& codes, XorRetrieval&& retrieval) {
            Mphf f;
            f.keys_ = n;
            f.buckets_ = codes.size();
            f.leaf_size_ = c.leaf_size;
            f.engine_ = c.engine;
            f.global_seed_ = seed;
            f.offsets_ = EliasFano{offsets};
            f.codes_ = LeafCodes{codes, c.compact ? LeafCodes::Mode::kRice : LeafCodes::Mode::kPlain};
            f.retrieval_ = std::move(retrieval);
            return f;
        });
}

Mphf Mphf::build(std::span<const std::string> keys, const BuildConfig& cfg, BuildStats* stats) {
    std::vector<std::string_view> views(keys.begin(), keys.end());
    return build(std::span<const std::string_view>{views}, cfg, stats);
}

uint64_t Mphf::query(const MasterHash& key) const {
    if (keys_ == 0) return 0;
    const uint64_t b = bucket_index(key, buckets_);
    const auto [lo, hi] = offsets_.adjacent(b);
    const auto size = static_cast<uint32_t>(hi - lo);
    // An empty bucket only receives keys outside the build set; keep them in range.
    if (size == 0) return std::min(lo, keys_ - 1);
    if (size == 1) return lo;
    const DecodedLeaf leaf{codes_[b], size, engine_};
    return lo + leaf(key, retrieval_.query(key));
}

std::vector<std::byte> Mphf::serialize() const {
    ByteWriter out;
    for (char c : kMagic) out.put_u8(static_cast<uint8_t>(c));
    out.put_u16(kFormatVersion);
    out.put_u16(static_cast<uint16_t>(leaf_size_));
    out.put_u8(static_cast<uint8_t>(engine_));
    out.put_u8(compact() ? 1 : 0);
    out.put_u64(keys_);
    out.put_u64(buckets_);
    out.put_u64(global_seed_);

    ByteWriter block;
    offsets_.serialize(block);
    out.put_u64(block.size());
    out.put_bytes(block.bytes());

    block = ByteWriter{};
    codes_.serialize(block);
    out.put_u64(block.size());
    out.put_bytes(block.bytes());

    retrieval_.serialize(out);
    out.put_u64(index_checksum(out.bytes()));
    return out.take();
}

Mphf Mphf::deserialize(std::span<const std::byte> bytes) {
    ByteReader in{bytes};
    const auto magic = in.get_bytes(kMagic.size());
    if (std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) throw FormatError("index: bad magic");
    const uint16_t version = in.get_u16();
    if (version != kFormatVersion) throw FormatError("index: unsupported format version " + std::to_string(version));
    if (bytes.size() < kHeaderBytes + kFramingBytes) throw FormatError("index: truncated input");

    const auto body = bytes.first(bytes.size() - 8);
    ByteReader tail{bytes.last(8)};
    if (tail.get_u64() != index_checksum(body)) throw FormatError("index: checksum mismatch");

    Mphf f;
    f.leaf_size_ = in.get_u16();
    const uint8_t engine = in.get_u8();
    const uint8_t compact = in.get_u8();
    f.keys_ = in.get_u64();
    f.buckets_ = in.get_u64();
    f.global_seed_ = in.get_u64();
    if (f.leaf_size_ < kMinBucketLeafSize || f.leaf_size_ > kMaxBucketLeafSize || engine > 2 || compact > 1) {
        throw FormatError("index: invalid configuration fields");
    }
    f.engine_ = static_cast<Engine>(engine);

    auto read_block = [&](auto parse) {
        const uint64_t length = in.get_u64();
        ByteReader block{in.get_bytes(length)};
        auto value = parse(block);
        if (block.remaining() != 0) throw FormatError("index: trailing bytes in block");
        return value;
    };
    f.offsets_ = read_block([](ByteReader& r) { return EliasFano::deserialize(r); });
    f.codes_ = read_block([](ByteReader& r) { return LeafCodes::deserialize(r); });
    ByteReader rest{body.subspan(in.position())};
    f.retrieval_ = XorRetrieval::deserialize(rest);
    if (rest.remaining() != 0) throw FormatError("index: trailing bytes before checksum");

    if (f.buckets_ != (f.keys_ + f.leaf_size_ - 1) / f.leaf_size_ || f.codes_.size() != f.buckets_ ||
        f.offsets_.size() != f.buckets_ + 1 || (compact == 1) != f.compact() || f.offsets_[0] != 0 ||
        f.offsets_[f.buckets_] != f.keys_) {
        throw FormatError("index: blocks do not match the header");
    }
    return f;
}

SpaceReport Mphf::space_report() const {
    SpaceReport r;
    r.keys = keys_;
    auto block_bits = [](const auto& part) {
        ByteWriter w;
        part.serialize(w);
        return 8 * static_cast<uint64_t>(w.size());
    };
    r.offset_bits = block_bits(offsets_) + offsets_.select_bits();
    r.seed_bits = block_bits(codes_) + codes_.select_bits();
    r.retrieval_bits = block_bits(retrieval_);
    r.metadata_bits = 8 * (kHeaderBytes + kFramingBytes);
    return r;
}

}  // namespace bshash
