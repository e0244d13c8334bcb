// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string_view>

#include "fpge/evaluator/dataset.hpp"
#include "fpge/evaluator/expr.hpp"

namespace fpge {

enum class Metric : std::uint8_t { rmse, mae };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view text);

// Lower is better. Worst is +infinity, so it orders after every finite value.
struct Fitness {
    double value = std::numeric_limits<double>::infinity();

    static constexpr Fitness worst() noexcept { return {}; }
    [[nodiscard]] bool is_worst() const noexcept { return value == std::numeric_limits<double>::infinity(); }

    friend auto operator<=>(Fitness const&, Fitness const&) = default;
};

// Error of a bound expression over every row; Worst if any prediction is
// NaN or infinite.
Fitness fitness(BoundExpr const& expr, Dataset const& dataset, Metric metric = Metric::rmse) noexcept;

// Parses, binds and scores. Parse or binding failures yield Worst.
Fitness fitness(std::string_view phenotype, Dataset const& dataset, Metric metric = Metric::rmse) noexcept;

} // namespace fpge
