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

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>

//! Pairing functions mapping two seed integers to one code.
//!
//! Three bijections are provided:
//!  - triangular: enumerates only pairs with x > y, row by row (x major, y minor). Used for the
//!    exchangeable outer seed pair, whose enumeration order equals the order the leaf search tests pairs in.
//!  - Szudzik: enumerates [k]x[k] completely before any pair with a coordinate >= k. Used for quad split
//!    subset seeds, which are not exchangeable.
//!  - Cantor: diagonal enumeration, kept for cross-checking.
//!
//! All inverses compute the root in floating point, correct it within a +-1 window using integer
//! arithmetic, and then verify by re-pairing. An inverse that cannot be verified is reported as an error,
//! never returned.
namespace bshash::pairing {

//! Inputs above this bound are rejected so that every code fits into 64 bits with slack.
inline constexpr uint64_t kMaxInput = (uint64_t{1} << 31) - 1;

struct Coordinates {
    uint64_t x{0};
    uint64_t y{0};

    friend constexpr auto operator<=>(const Coordinates&, const Coordinates&) = default;
};

class PairingError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

//! x(x-1)/2 + y, defined for x > y.
uint64_t pair_triangular(uint64_t x, uint64_t y);
std::optional<Coordinates> try_unpair_triangular(uint64_t z) noexcept;
Coordinates unpair_triangular(uint64_t z);

//! y^2 + x if x < y, x^2 + x + y otherwise.
uint64_t pair_szudzik(uint64_t x, uint64_t y);
std::optional<Coordinates> try_unpair_szudzik(uint64_t z) noexcept;
Coordinates unpair_szudzik(uint64_t z);

//! (x + y)(x + y + 1)/2 + y
uint64_t pair_cantor(uint64_t x, uint64_t y);
std::optional<Coordinates> try_unpair_cantor(uint64_t z) noexcept;
Coordinates unpair_cantor(uint64_t z);

}  // namespace bshash::pairing
