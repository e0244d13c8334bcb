// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "fpge/precision/natural.hpp"

namespace fpge {

class Rng;

inline constexpr std::uint32_t kDefaultPrecision = 150;
inline constexpr std::uint32_t kMaxPrecision = 100'000;

// An exact value numerator / 10^precision in [0, 1]. This is the whole
// genotype of an individual; nothing about it is ever rounded.
class UnitFraction {
public:
    explicit UnitFraction(std::uint32_t precision = kDefaultPrecision);
    // Throws std::invalid_argument if numerator > 10^precision.
    UnitFraction(Natural numerator, std::uint32_t precision);

    static UnitFraction zero(std::uint32_t precision = kDefaultPrecision) { return UnitFraction(precision); }
    static UnitFraction one(std::uint32_t precision = kDefaultPrecision);

    // Accepts `0`, `1`, `0.<digits>` and `1.<zeros>` with at most `precision`
    // fractional digits. Anything else throws fpge::Error(ErrorKind::data).
    static UnitFraction parse(std::string_view text, std::uint32_t precision = kDefaultPrecision);

    // Shortest exact form ("0", "1", "0.25") or, untrimmed, all digits.
    [[nodiscard]] std::string to_string(bool trimmed = true) const;

    [[nodiscard]] Natural const& numerator() const noexcept { return numerator_; }
    [[nodiscard]] std::uint32_t precision() const noexcept { return precision_; }
    [[nodiscard]] bool is_zero() const noexcept { return numerator_.is_zero(); }
    [[nodiscard]] bool is_one() const;
    // Nearest double, for plotting and diagnostics only.
    [[nodiscard]] double to_double() const noexcept;

    // Multiplies by k, keeps the fractional part and returns the integer
    // part. The value 1 yields k-1 and stays 1.
    std::uint32_t split_in_place(std::uint32_t k);

    friend bool operator==(UnitFraction const&, UnitFraction const&) = default;
    friend std::strong_ordering operator<=>(UnitFraction const& lhs, UnitFraction const& rhs);

private:
    Natural numerator_;
    std::uint32_t precision_;
};

struct SplitResult {
    std::uint32_t index;
    UnitFraction residual;
};

// index = floor(v * k), residual = frac(v * k); v == 1 clamps to (k-1, 1).
SplitResult split(UnitFraction const& v, std::uint32_t k);

// A signed offset with |delta| < 1 at the same precision as the value it moves.
struct Delta {
    bool negative = false;
    UnitFraction magnitude;
};

// (v + delta) mod 1. A zero delta leaves v untouched, including v == 1.
UnitFraction perturb(UnitFraction const& v, Delta const& delta);

// v - w and v + w wrapped modulo 1; helpers for the differential operators.
UnitFraction wrap_add(UnitFraction const& v, UnitFraction const& w);
UnitFraction wrap_sub(UnitFraction const& v, UnitFraction const& w);

UnitFraction random_unit(Rng& rng, std::uint32_t precision = kDefaultPrecision);
UnitFraction random_in_range(Rng& rng, UnitFraction const& lo, UnitFraction const& hi);
// Uniform on [-half_width, half_width) at full resolution.
Delta random_delta(Rng& rng, UnitFraction const& half_width);

} // namespace fpge
