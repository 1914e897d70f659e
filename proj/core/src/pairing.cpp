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

#include <bshash/pairing.hpp>

#include <cmath>
#include <string>

#include <bshash/hashing.hpp>

namespace bshash::pairing {

namespace {

    using u128 = uint128;

    constexpr u128 triangle(u128 x) { return x * (x - 1) / 2; }  // x >= 1
    constexpr u128 cantor_base(u128 w) { return w * (w + 1) / 2; }

    // Floating-point estimate of a root, clamped to the representable range before conversion.
    uint64_t root_estimate(double r) {
        if (!(r > 0.0)) return 0;
        if (r >= 18446744073709551615.0) return UINT64_MAX;
        return static_cast<uint64_t>(r);
    }

    void check_input(uint64_t v, const char* what) {
        if (v > kMaxInput) {
            throw PairingError(std::string{what} + ": input " + std::to_string(v) + " exceeds pairing bound");
        }
    }

    bool in_domain(const Coordinates& c) { return c.x <= kMaxInput && c.y <= kMaxInput; }

}  // namespace

uint64_t pair_triangular(uint64_t x, uint64_t y) {
    check_input(x, "pair_triangular");
    check_input(y, "pair_triangular");
    if (x <= y) {
        throw PairingError("pair_triangular: requires x > y, got x=" + std::to_string(x) + " y=" + std::to_string(y));
    }
    return static_cast<uint64_t>(triangle(x) + y);
}

std::optional<Coordinates> try_unpair_triangular(uint64_t z) noexcept {
    const uint64_t estimate = root_estimate(std::floor(0.5 + std::sqrt(0.25 + 2.0 * static_cast<double>(z))));
    // Row x holds the codes [T(x), T(x) + x).
    for (uint64_t x : {estimate, estimate - 1, estimate + 1}) {
        if (x == 0 || x > kMaxInput) continue;
        const u128 base = triangle(x);
        if (base <= z && z - base < x) {
            const Coordinates c{x, static_cast<uint64_t>(z - base)};
            if (in_domain(c) && c.x > c.y && triangle(c.x) + c.y == z) return c;
        }
    }
    return std::nullopt;
}

Coordinates unpair_triangular(uint64_t z) {
    if (auto c = try_unpair_triangular(z)) return *c;
    throw PairingError("unpair_triangular: cannot invert code " + std::to_string(z));
}

uint64_t pair_szudzik(uint64_t x, uint64_t y) {
    check_input(x, "pair_szudzik");
    check_input(y, "pair_szudzik");
    if (x < y) return y * y + x;
    return x * x + x + y;
}

std::optional<Coordinates> try_unpair_szudzik(uint64_t z) noexcept {
    const uint64_t estimate = root_estimate(std::floor(std::sqrt(static_cast<double>(z))));
    // Shell s holds the codes [s^2, (s+1)^2).
    for (uint64_t s : {estimate, estimate - 1, estimate + 1}) {
        if (s > kMaxInput) continue;
        const u128 base = u128{s} * s;
        if (base > z || z - base > 2 * u128{s}) continue;
        const uint64_t rest = static_cast<uint64_t>(z - base);
        const Coordinates c = rest < s ? Coordinates{rest, s} : Coordinates{s, rest - s};
        if (!in_domain(c)) continue;
        const u128 back = c.x < c.y ? u128{c.y} * c.y + c.x : u128{c.x} * c.x + c.x + c.y;
        if (back == z) return c;
    }
    return std::nullopt;
}

Coordinates unpair_szudzik(uint64_t z) {
    if (auto c = try_unpair_szudzik(z)) return *c;
    throw PairingError("unpair_szudzik: cannot invert code " + std::to_string(z));
}

uint64_t pair_cantor(uint64_t x, uint64_t y) {
    check_input(x, "pair_cantor");
    check_input(y, "pair_cantor");
    return static_cast<uint64_t>(cantor_base(u128{x} + y) + y);
}

std::optional<Coordinates> try_unpair_cantor(uint64_t z) noexcept {
    const uint64_t estimate =
        root_estimate(std::floor((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0));
    // Diagonal w holds the codes [w(w+1)/2, w(w+1)/2 + w].
    for (uint64_t w : {estimate, estimate - 1, estimate + 1}) {
        if (w > 2 * kMaxInput) continue;
        const u128 base = cantor_base(w);
        if (base > z || z - base > w) continue;
        const uint64_t y = static_cast<uint64_t>(z - base);
        const Coordinates c{w - y, y};
        if (in_domain(c) && cantor_base(u128{c.x} + c.y) + c.y == z) return c;
    }
    return std::nullopt;
}

Coordinates unpair_cantor(uint64_t z) {
    if (auto c = try_unpair_cantor(z)) return *c;
    throw PairingError("unpair_cantor: cannot invert code " + std::to_string(z));
}

}  // namespace bshash::pairing
