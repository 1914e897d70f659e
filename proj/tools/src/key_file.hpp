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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bshash::cli {

//! Key file layout: magic "BSHK", u64 count, then per key a u16 length and the key bytes.
std::vector<std::byte> encode_key_file(std::span<const std::string> keys);
std::vector<std::string> decode_key_file(std::span<const std::byte> bytes);

void write_key_file(const std::filesystem::path& path, std::span<const std::string> keys);
std::vector<std::string> read_key_file(const std::filesystem::path& path);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

struct KeyGenConfig {
    uint64_t count{0};
    uint32_t min_len{10};
    uint32_t max_len{50};
    uint64_t seed{0};
};

//! Distinct random strings with lengths uniform in [min_len, max_len] and bytes in 1..255.
//! The output depends only on the config (mt19937_64 with multiply-high range reduction).
std::vector<std::string> generate_keys(const KeyGenConfig& cfg);

}  // namespace bshash::cli
