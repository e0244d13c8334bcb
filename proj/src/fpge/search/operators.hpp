// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpge/precision/unit_fraction.hpp"

namespace fpge {

class Rng;

// v + u with u uniform on [-half_width, half_width), wrapped into [0, 1).
UnitFraction mutate(UnitFraction const& v, UnitFraction const& half_width, Rng& rng);

// Uniform on [min(a, b), max(a, b)].
UnitFraction crossover(UnitFraction const& a, UnitFraction const& b, Rng& rng);

// Differential weight held exactly as numerator / 10^9.
struct DeWeight {
    static constexpr std::uint32_t kScale = 1'000'000'000U;
    std::uint32_t numerator = kScale / 2;

    // Rounds to nine decimal places; accepts (0, 2].
    static DeWeight from_double(double weight);
    [[nodiscard]] double value() const noexcept { return static_cast<double>(numerator) / kScale; }
};

// base + F * (a - b) wrapped modulo 1. F * |a - b| is truncated to the
// genotype precision, the only inexact step in any operator.
UnitFraction de_trial(UnitFraction const& base, UnitFraction const& a, UnitFraction const& b, DeWeight weight);

inline constexpr std::uint32_t kCodonRange = 1U << 16;

using Codons = std::vector<std::uint32_t>;

Codons random_codons(std::size_t length, Rng& rng);
// a[0, cut) followed by b[cut, n).
Codons one_point_crossover(std::span<std::uint32_t const> a, std::span<std::uint32_t const> b, std::size_t cut);
// Replaces each codon with a fresh draw with the given probability.
void mutate_codons(Codons& genome, double probability, Rng& rng);

} // namespace fpge
