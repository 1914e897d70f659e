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

#include "key_file.hpp"

#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <bshash/byte_io.hpp>
#include <bshash/hashing.hpp>

namespace bshash::cli {

namespace {

    constexpr std::string_view kKeyMagic = "BSHK";

    //! Number of distinct strings with lengths in [min_len, max_len] over 255 symbols, saturated.
    uint64_t keyspace(uint32_t min_len, uint32_t max_len) {
        uint64_t total = 0;
        uint64_t power = 1;
        for (uint32_t len = 0; len <= max_len; ++len) {
            if (len >= min_len) {
                if (total > UINT64_MAX - power) return UINT64_MAX;
                total += power;
            }
            if (power > UINT64_MAX / 255) {
                // Every longer length adds at least this many strings.
                return len + 1 <= max_len ? UINT64_MAX : total;
            }
            power *= 255;
        }
        return total;
    }

}  // namespace

std::vector<std::byte> encode_key_file(std::span<const std::string> keys) {
    ByteWriter out;
    for (char c : kKeyMagic) out.put_u8(static_cast<uint8_t>(c));
    out.put_u64(keys.size());
    for (const std::string& key : keys) {
        if (key.size() > UINT16_MAX) throw std::invalid_argument("key file: key longer than 65535 bytes");
        out.put_u16(static_cast<uint16_t>(key.size()));
        out.put_bytes(std::as_bytes(std::span{key.data(), key.size()}));
    }
    return out.take();
}

std::vector<std::string> decode_key_file(std::span<const std::byte> bytes) {
    ByteReader in{bytes};
    const auto magic = in.get_bytes(kKeyMagic.size());
    if (std::memcmp(magic.data(), kKeyMagic.data(), kKeyMagic.size()) != 0) throw FormatError("key file: bad magic");
    const uint64_t count = in.get_u64();
    if (count > in.remaining() / 2) throw FormatError("key file: count exceeds file size");
    std::vector<std::string> keys;
    keys.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        const uint16_t len = in.get_u16();
        const auto data = in.get_bytes(len);
        keys.emplace_back(reinterpret_cast<const char*>(data.data()), data.size());
    }
    if (in.remaining() != 0) throw FormatError("key file: trailing bytes");
    return keys;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw std::runtime_error("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    std::vector<std::byte> bytes(size);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_key_file(const std::filesystem::path& path, std::span<const std::string> keys) {
    write_file(path, encode_key_file(keys));
}

std::vector<std::string> read_key_file(const std::filesystem::path& path) { return decode_key_file(read_file(path)); }

std::vector<std::string> generate_keys(const KeyGenConfig& cfg) {
    if (cfg.min_len < 1 || cfg.min_len > cfg.max_len || cfg.max_len > UINT16_MAX) {
        throw std::invalid_argument("genkeys: need 1 <= min_len <= max_len <= 65535");
    }
    if (cfg.count > keyspace(cfg.min_len, cfg.max_len)) {
        throw std::invalid_argument("genkeys: " + std::to_string(cfg.count) +
                                    " distinct keys do not exist for this length range");
    }
    std::mt19937_64 rng{cfg.seed};
    const uint64_t lengths = uint64_t{cfg.max_len} - cfg.min_len + 1;
    std::vector<std::string> keys;
    keys.reserve(cfg.count);
    std::unordered_set<std::string> seen;
    seen.reserve(cfg.count);
    while (keys.size() < cfg.count) {
        std::string key(cfg.min_len + reduce(rng(), lengths), '\0');
        for (char& c : key) c = static_cast<char>(1 + reduce(rng(), 255));
        if (seen.insert(key).second) keys.push_back(std::move(key));
    }
    return keys;
}

}  // namespace bshash::cli
