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
#include <span>
#include <stdexcept>

#include <bshash/hashing.hpp>

namespace bshash {

//! Largest leaf the search engines and the orientation check support.
inline constexpr uint32_t kMaxLeafSize = 128;

//! One bit per key of a leaf.
using KeyMask = uint128;

//! Range of each of the two leaf hash functions: ceil(n/2).
constexpr uint32_t half_range(uint32_t n) { return (n + 1) / 2; }

//! Shift applied to the second hash function. For odd n it equals half_range(n) - 1, so the middle
//! position is reachable from both halves.
constexpr uint32_t upper_offset(uint32_t n) { return n - half_range(n); }

//! Bipartite pseudograph of a leaf: one edge per key between endpoint0 in [0, ceil(n/2)) and
//! endpoint1 in [n - ceil(n/2), n).
struct LeafGraph {
    uint32_t size{0};
    std::array<uint8_t, kMaxLeafSize> endpoint0{};
    std::array<uint8_t, kMaxLeafSize> endpoint1{};

    //! Builds the graph from two unshifted half-range position arrays; `upper` is shifted by upper_offset(size).
    static LeafGraph from_halves(std::span<const uint8_t> lower, std::span<const uint8_t> upper);
};

//! Choice bit per key: 0 = the key occupies endpoint0, 1 = endpoint1.
class OrientationBits {
  public:
    OrientationBits() = default;
    explicit OrientationBits(uint32_t size) : size_(size) {}

    [[nodiscard]] uint32_t size() const { return size_; }
    [[nodiscard]] bool operator[](uint32_t key) const { return ((bits_ >> key) & 1) != 0; }
    void set(uint32_t key, bool value) {
        const KeyMask m = KeyMask{1} << key;
        bits_ = value ? (bits_ | m) : (bits_ & ~m);
    }
    [[nodiscard]] KeyMask mask() const { return bits_; }

    friend bool operator==(const OrientationBits&, const OrientationBits&) = default;

  private:
    uint32_t size_{0};
    KeyMask bits_{0};
};

class OrientationError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

//! True iff every connected component has as many edges as nodes and no node is left uncovered.
//! Linear time union-find with per-root node and edge counters.
bool is_orientable(const LeafGraph& graph);

//! Hot-path variant working directly on the two position arrays of a candidate pair (`upper` unshifted).
bool is_orientable(uint32_t size, const uint8_t* lower, const uint8_t* upper);

//! Extracts an orientation of an orientable graph by peeling degree-1 nodes and walking the remaining
//! cycles. Deterministic: leaves are peeled in FIFO order seeded by ascending node index, every cycle is
//! walked from its smallest node along its lowest-numbered free edge, and each edge goes to the node it
//! leads to. Throws OrientationError if the graph is not orientable.
OrientationBits orient(const LeafGraph& graph);

}  // namespace bshash
