// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpge/decoder/decoder.hpp"
#include "fpge/evaluator/dataset.hpp"
#include "fpge/evaluator/fitness.hpp"
#include "fpge/grammar/grammar.hpp"
#include "fpge/precision/unit_fraction.hpp"

namespace fpge {

class Rng;

enum class Algorithm : std::uint8_t { fpge_dfs, fpge_bfs, de_dfs, de_bfs, rand_dfs, rand_bfs, int_ge };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::fpge_dfs, Algorithm::fpge_bfs, Algorithm::de_dfs, Algorithm::de_bfs,
    Algorithm::rand_dfs, Algorithm::rand_bfs, Algorithm::int_ge,
};

std::string_view to_string(Algorithm algorithm) noexcept;
// "fpge-dfs", ..., "int-ge"; throws fpge::Error(ErrorKind::usage).
Algorithm parse_algorithm(std::string_view text);
// int-ge always decodes leftmost-first.
DecodeOrder decode_order(Algorithm algorithm) noexcept;

struct SearchConfig {
    Algorithm algorithm = Algorithm::fpge_dfs;
    std::uint32_t precision = kDefaultPrecision;
    std::size_t population = 500;
    // 0 derives the generation count from budget / population.
    std::size_t generations = 0;
    std::size_t budget = 25'000;
    std::string mutation_half_width = "0.05";
    double crossover_probability = 0.75;
    std::size_t tournament_size = 2;
    std::size_t elitism = 1;
    double de_weight = 0.5;
    std::size_t genome_length = 200;
    double codon_mutation_probability = 0.01;
    DecodeLimits limits;
    Metric metric = Metric::rmse;
    std::uint64_t seed = 0;

    // Throws fpge::Error(ErrorKind::usage) on inconsistent settings.
    void validate() const;
    // One `key = value` line per setting, in a fixed order.
    [[nodiscard]] std::string canonical() const;
    [[nodiscard]] std::uint64_t hash() const;
};

// Best-so-far fitness after every evaluation of one run.
struct Trace {
    std::vector<double> best;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string best_phenotype;
    // Decimal genotype (FP-GE variants) or space-separated codons (int-ge).
    std::string best_genotype;
    std::optional<double> test_fitness;
};

Trace fpge_evolve(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng);
Trace de_optimize(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng);
Trace random_search(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng);
Trace intge_evolve(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng);

// Validates, seeds a generator from cfg.seed and dispatches on cfg.algorithm.
Trace run_search(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset);

struct AggregatedTrace {
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<Trace> runs;
};

// Per-evaluation mean and population standard deviation. If some runs are
// still at Worst the mean is Worst and the spread is infinite; if all are,
// the spread is 0.
AggregatedTrace aggregate(std::vector<Trace> runs);

// Runs `runs` independent searches seeded cfg.seed + r. When `holdout` is
// given, each run's best phenotype is also scored on it.
AggregatedTrace run_experiment(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, std::size_t runs,
    unsigned threads = 1, Dataset const* holdout = nullptr);

} // namespace fpge
