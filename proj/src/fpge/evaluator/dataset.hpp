// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fpge {

class Rng;

// Row-major table of inputs with one target per row.
struct Dataset {
    std::vector<std::string> variable_names;
    std::string target_name = "y";
    std::vector<double> values;
    std::vector<double> targets;
    // Free-form provenance label carried into output metadata.
    std::string id;

    [[nodiscard]] std::size_t rows() const noexcept { return targets.size(); }
    [[nodiscard]] std::size_t columns() const noexcept { return variable_names.size(); }
    [[nodiscard]] std::span<double const> row(std::size_t i) const
    {
        return std::span<double const>(values).subspan(i * columns(), columns());
    }

    // Throws fpge::Error(ErrorKind::data) when the invariants do not hold.
    void validate() const;
};

enum class Benchmark : std::uint8_t { keijzer6, paige1, vlad4 };

std::string_view to_string(Benchmark benchmark) noexcept;
// Throws fpge::Error(ErrorKind::usage) for unknown names.
Benchmark parse_benchmark(std::string_view name);

struct SamplingRange {
    double lo;
    double hi;
};

// Uniform input box used when no override is given. These are fixture
// choices; override them for other protocols.
SamplingRange default_range(Benchmark benchmark) noexcept;
std::size_t benchmark_arity(Benchmark benchmark) noexcept;
double benchmark_target(Benchmark benchmark, std::span<double const> x) noexcept;
// The target formula in the phenotype language, over x0..x{n-1}.
std::string_view generating_expression(Benchmark benchmark) noexcept;

// Samples n rows. Keijzer6 rejects |x0-10| < 0.5 and |x1| < 0.05; Paige1
// rejects |xi| < 0.01 so the x^-4 terms stay finite.
Dataset generate_dataset(Benchmark benchmark, std::size_t n, Rng& rng, std::optional<SamplingRange> range = std::nullopt);

// Header names the variables, the last column is the target. Lines starting
// with '#' are skipped. Throws fpge::Error(ErrorKind::data) with a line
// number for ragged rows or non-numeric cells.
Dataset parse_csv(std::string_view text, std::string id = {});
Dataset load_csv(std::filesystem::path const& path);
std::string format_csv(Dataset const& dataset, std::string_view preamble = {});
void write_csv(Dataset const& dataset, std::filesystem::path const& path, std::string_view preamble = {});

// First (1 - fraction) of the rows for training, the rest held out.
std::pair<Dataset, Dataset> holdout_split(Dataset const& dataset, double fraction);

// Shortest text that parses back to the same double; "inf"/"-inf"/"nan".
std::string format_double(double value);

} // namespace fpge
