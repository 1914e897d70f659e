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

#include <bshash/orientation.hpp>

#include <string>

namespace bshash {

namespace {

    struct UnionFind {
        std::array<uint8_t, kMaxLeafSize> parent;
        std::array<uint8_t, kMaxLeafSize> nodes;
        std::array<uint8_t, kMaxLeafSize> edges;

        explicit UnionFind(uint32_t n) {
            for (uint32_t i = 0; i < n; ++i) {
                parent[i] = static_cast<uint8_t>(i);
                nodes[i] = 1;
                edges[i] = 0;
            }
        }

        uint8_t find(uint8_t v) {
            while (parent[v] != v) {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            return v;
        }

        //! Adds an edge; false once some component has more edges than nodes.
        bool add_edge(uint8_t u, uint8_t v) {
            uint8_t ru = find(u);
            uint8_t rv = find(v);
            if (ru == rv) {
                return ++edges[ru] <= nodes[ru];
            }
            if (nodes[ru] < nodes[rv]) std::swap(ru, rv);
            parent[rv] = ru;
            nodes[ru] = static_cast<uint8_t>(nodes[ru] + nodes[rv]);
            edges[ru] = static_cast<uint8_t>(edges[ru] + edges[rv] + 1);
            return edges[ru] <= nodes[ru];
        }
    };

    KeyMask full_mask(uint32_t n) { return n >= 128 ? ~KeyMask{0} : (KeyMask{1} << n) - 1; }

    // Every component with edges <= nodes and sum(edges) == sum(nodes) == n forces equality everywhere,
    // so the union-find pass only needs to detect an overfull component.
    template <typename Lower, typename Upper>
    bool orientable_impl(uint32_t n, Lower lower, Upper upper) {
        UnionFind uf{n};
        for (uint32_t k = 0; k < n; ++k) {
            if (!uf.add_edge(lower(k), upper(k))) return false;
        }
        return true;
    }

}  // namespace

LeafGraph LeafGraph::from_halves(std::span<const uint8_t> lower, std::span<const uint8_t> upper) {
    if (lower.size() != upper.size() || lower.size() > kMaxLeafSize) {
        throw std::invalid_argument("LeafGraph::from_halves: mismatched or oversized position arrays");
    }
    LeafGraph g;
    g.size = static_cast<uint32_t>(lower.size());
    const uint32_t offset = upper_offset(g.size);
    for (uint32_t k = 0; k < g.size; ++k) {
        g.endpoint0[k] = lower[k];
        g.endpoint1[k] = static_cast<uint8_t>(upper[k] + offset);
    }
    return g;
}

bool is_orientable(const LeafGraph& graph) {
    // A node without edges can never receive a key.
    KeyMask covered = 0;
    for (uint32_t k = 0; k < graph.size; ++k) {
        covered |= KeyMask{1} << graph.endpoint0[k];
        covered |= KeyMask{1} << graph.endpoint1[k];
    }
    if (covered != full_mask(graph.size)) return false;
    return orientable_impl(
        graph.size, [&](uint32_t k) { return graph.endpoint0[k]; }, [&](uint32_t k) { return graph.endpoint1[k]; });
}

bool is_orientable(uint32_t size, const uint8_t* lower, const uint8_t* upper) {
    const auto offset = static_cast<uint8_t>(upper_offset(size));
    return orientable_impl(
        size, [&](uint32_t k) { return lower[k]; }, [&](uint32_t k) { return static_cast<uint8_t>(upper[k] + offset); });
}

OrientationBits orient(const LeafGraph& graph) {
    const uint32_t n = graph.size;
    OrientationBits bits{n};
    if (n == 0) return bits;

    // Per node: degree among unassigned edges and XOR of their ids. A degree-1 node's XOR is its only edge.
    // A self-loop contributes 2 to the degree and cancels out of the XOR.
    std::array<uint16_t, kMaxLeafSize> degree{};
    std::array<uint8_t, kMaxLeafSize> incident_xor{};
    for (uint32_t e = 0; e < n; ++e) {
        const uint8_t u = graph.endpoint0[e];
        const uint8_t v = graph.endpoint1[e];
        if (u >= n || v >= n) throw OrientationError("orient: endpoint out of range");
        degree[u]++;
        degree[v]++;
        incident_xor[u] ^= static_cast<uint8_t>(e);
        incident_xor[v] ^= static_cast<uint8_t>(e);
    }

    std::array<uint8_t, kMaxLeafSize> taken{};
    std::array<uint8_t, kMaxLeafSize> used{};
    auto assign = [&](uint32_t e, uint32_t node) {
        used[e] = 1;
        taken[node] = 1;
        bits.set(e, graph.endpoint0[e] != node);
    };
    auto other_end = [&](uint32_t e, uint32_t node) -> uint32_t {
        return graph.endpoint0[e] == node ? graph.endpoint1[e] : graph.endpoint0[e];
    };

    // Peel: a degree-1 node must receive its only edge.
    std::array<uint8_t, kMaxLeafSize> queue{};
    uint32_t tail = 0;
    for (uint32_t v = 0; v < n; ++v) {
        if (degree[v] == 1) queue[tail++] = static_cast<uint8_t>(v);
    }
    for (uint32_t head = 0; head < tail; ++head) {
        const uint32_t v = queue[head];
        if (degree[v] != 1) continue;
        const uint32_t e = incident_xor[v];
        const uint32_t u = other_end(e, v);
        assign(e, v);
        degree[v] = 0;
        incident_xor[v] = 0;
        degree[u]--;
        incident_xor[u] ^= static_cast<uint8_t>(e);
        if (degree[u] == 1) queue[tail++] = static_cast<uint8_t>(u);
    }

    // What remains must be disjoint cycles (self-loops and parallel edges included).
    for (uint32_t v = 0; v < n; ++v) {
        if (taken[v]) continue;
        if (degree[v] != 2) throw OrientationError("orient: graph is not orientable (node " + std::to_string(v) + ")");
        uint32_t e = 0;
        while (e < n && (used[e] || (graph.endpoint0[e] != v && graph.endpoint1[e] != v))) ++e;
        if (e == n) throw OrientationError("orient: graph is not orientable (broken cycle)");
        uint32_t current = v;
        while (true) {
            const uint32_t next = other_end(e, current);
            if (taken[next]) throw OrientationError("orient: graph is not orientable (cycle collision)");
            assign(e, next);
            if (next == v) break;
            e = incident_xor[next] ^ e;
            if (e >= n || used[e]) throw OrientationError("orient: graph is not orientable (broken cycle)");
            current = next;
        }
    }

    // Direct bijectivity check.
    KeyMask seen = 0;
    for (uint32_t e = 0; e < n; ++e) {
        if (!used[e]) throw OrientationError("orient: graph is not orientable (unassigned key)");
        const uint32_t pos = bits[e] ? graph.endpoint1[e] : graph.endpoint0[e];
        if ((seen >> pos) & 1) throw OrientationError("orient: graph is not orientable (position collision)");
        seen |= KeyMask{1} << pos;
    }
    return bits;
}

}  // namespace bshash
