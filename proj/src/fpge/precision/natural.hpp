// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fpge {

class Rng;

// Arbitrary-size non-negative integer stored in base 10^9, least significant
// limb first. Decimal limbs make digit-position arithmetic (dividing by a
// power of ten, printing) exact and cheap, which is all the genotype needs.
class Natural {
public:
    static constexpr std::uint32_t kBase = 1'000'000'000U;
    static constexpr unsigned kLimbDigits = 9;

    Natural() = default;
    explicit Natural(std::uint64_t value);

    static Natural pow10(unsigned exponent);
    // Digits only, no sign or separators. Leading zeros are allowed.
    static Natural parse_digits(std::string_view digits);

    [[nodiscard]] bool is_zero() const noexcept { return limbs_.empty(); }
    [[nodiscard]] unsigned digit_count() const noexcept;
    [[nodiscard]] std::string to_string() const;
    // Zero-padded on the left to at least `width` digits.
    [[nodiscard]] std::string to_string(unsigned width) const;
    [[nodiscard]] bool fits_u64() const noexcept;
    [[nodiscard]] std::uint64_t to_u64() const;
    [[nodiscard]] double to_double() const noexcept;
    [[nodiscard]] std::vector<std::uint32_t> const& limbs() const noexcept { return limbs_; }

    Natural& mul_small(std::uint32_t factor);
    // Divides in place and returns the remainder. divisor must be non-zero.
    std::uint32_t divmod_small(std::uint32_t divisor);
    Natural& operator+=(Natural const& rhs);
    // Requires *this >= rhs.
    Natural& operator-=(Natural const& rhs);

    // Removes every digit at decimal position >= digits and returns the
    // removed part, i.e. (*this / 10^digits) while *this becomes
    // (*this % 10^digits). The quotient must fit in 64 bits.
    std::uint64_t take_high_digits(unsigned digits);

    friend Natural operator+(Natural lhs, Natural const& rhs) { return lhs += rhs; }
    friend Natural operator-(Natural lhs, Natural const& rhs) { return lhs -= rhs; }

    friend bool operator==(Natural const&, Natural const&) = default;
    friend std::strong_ordering operator<=>(Natural const& lhs, Natural const& rhs) noexcept;

private:
    void trim() noexcept;

    std::vector<std::uint32_t> limbs_;
};

// Uniform on [0, 10^digits), exactly.
Natural random_below_pow10(Rng& rng, unsigned digits);
// Uniform on [0, bound], exactly (rejection against the next power of ten).
Natural random_at_most(Rng& rng, Natural const& bound);

} // namespace fpge
