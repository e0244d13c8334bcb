// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/search/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "fpge/precision/rng.hpp"

namespace fpge {

UnitFraction mutate(UnitFraction const& v, UnitFraction const& half_width, Rng& rng)
{
    return perturb(v, random_delta(rng, half_width));
}

UnitFraction crossover(UnitFraction const& a, UnitFraction const& b, Rng& rng)
{
    return a <= b ? random_in_range(rng, a, b) : random_in_range(rng, b, a);
}

DeWeight DeWeight::from_double(double weight)
{
    if (!(weight > 0.0 && weight <= 2.0)) {
        throw std::invalid_argument("differential weight must be in (0, 2]");
    }
    return DeWeight { static_cast<std::uint32_t>(std::llround(weight * kScale)) };
}

UnitFraction de_trial(UnitFraction const& base, UnitFraction const& a, UnitFraction const& b, DeWeight weight)
{
    auto const precision = base.precision();
    bool const negative = a < b;
    auto step = negative ? b.numerator() - a.numerator() : a.numerator() - b.numerator();
    step.mul_small(weight.numerator);
    step.divmod_small(DeWeight::kScale);
    auto const modulus = Natural::pow10(precision);
    while (step > modulus) {
        step -= modulus;
    }
    UnitFraction const offset(std::move(step), precision);
    return negative ? wrap_sub(base, offset) : wrap_add(base, offset);
}

Codons random_codons(std::size_t length, Rng& rng)
{
    Codons genome(length);
    for (auto& c : genome) {
        c = static_cast<std::uint32_t>(rng.uniform_below(kCodonRange));
    }
    return genome;
}

Codons one_point_crossover(std::span<std::uint32_t const> a, std::span<std::uint32_t const> b, std::size_t cut)
{
    if (a.size() != b.size() || cut > a.size()) {
        throw std::invalid_argument("one_point_crossover: genomes differ in length or cut is out of range");
    }
    Codons child(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut));
    child.insert(child.end(), b.begin() + static_cast<std::ptrdiff_t>(cut), b.end());
    return child;
}

void mutate_codons(Codons& genome, double probability, Rng& rng)
{
    if (probability <= 0.0) {
        return;
    }
    for (auto& c : genome) {
        if (rng.bernoulli(probability)) {
            c = static_cast<std::uint32_t>(rng.uniform_below(kCodonRange));
        }
    }
}

} // namespace fpge
