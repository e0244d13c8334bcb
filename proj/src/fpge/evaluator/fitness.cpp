// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/evaluator/fitness.hpp"

#include <cmath>
#include <stdexcept>

#include "fpge/error.hpp"

namespace fpge {

std::string_view to_string(Metric metric) noexcept { return metric == Metric::rmse ? "rmse" : "mae"; }

Metric parse_metric(std::string_view text)
{
    if (text == "rmse") {
        return Metric::rmse;
    }
    if (text == "mae") {
        return Metric::mae;
    }
    throw Error(ErrorKind::usage, "unknown metric '" + std::string(text) + "' (expected rmse or mae)");
}

Fitness fitness(BoundExpr const& expr, Dataset const& dataset, Metric metric) noexcept
{
    double acc = 0.0;
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
        auto const prediction = expr.evaluate(dataset.row(r));
        if (!std::isfinite(prediction)) {
            return Fitness::worst();
        }
        auto const err = prediction - dataset.targets[r];
        acc += metric == Metric::rmse ? err * err : std::fabs(err);
    }
    auto const mean = acc / static_cast<double>(dataset.rows());
    auto const value = metric == Metric::rmse ? std::sqrt(mean) : mean;
    if (!std::isfinite(value)) {
        return Fitness::worst();
    }
    return Fitness { value };
}

Fitness fitness(std::string_view phenotype, Dataset const& dataset, Metric metric) noexcept
{
    try {
        auto const bound = bind(parse_expr(phenotype), dataset.variable_names);
        return fitness(bound, dataset, metric);
    }
    catch (std::exception const&) {
        return Fitness::worst();
    }
}

} // namespace fpge
