// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/search/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fpge/error.hpp"
#include "fpge/evaluator/dataset.hpp"
#include "fpge/precision/rng.hpp"
#include "fpge/search/operators.hpp"
#include "fpge/util/parallel.hpp"

namespace fpge {

namespace {

constexpr double kWorst = std::numeric_limits<double>::infinity();

[[noreturn]] void config_error(std::string const& what) { throw Error(ErrorKind::usage, "search config: " + what); }

struct Scored {
    Fitness fitness;
    std::string phenotype;
};

// Decodes and scores genotypes under one run's settings.
class Scorer {
public:
    Scorer(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset)
        : cfg_(cfg)
        , grammar_(grammar)
        , dataset_(dataset)
        , order_(decode_order(cfg.algorithm))
    {
    }

    Scored operator()(UnitFraction const& genotype) const
    {
        return score(decode(genotype, grammar_, order_, cfg_.limits));
    }

    Scored operator()(Codons const& genome) const { return score(codon_decode(genome, grammar_, cfg_.limits)); }

private:
    Scored score(DecodeOutcome const& outcome) const
    {
        if (!outcome.valid()) {
            return { Fitness::worst(), {} };
        }
        auto phenotype = render(outcome.as_valid().tree);
        auto const f = fitness(phenotype, dataset_, cfg_.metric);
        return { f, std::move(phenotype) };
    }

    SearchConfig const& cfg_;
    Grammar const& grammar_;
    Dataset const& dataset_;
    DecodeOrder order_;
};

// Counts evaluations against the budget and records best-so-far.
class Recorder {
public:
    explicit Recorder(SearchConfig const& cfg)
        : budget_(cfg.budget)
    {
        trace_.seed = cfg.seed;
        trace_.config_hash = cfg.hash();
        trace_.best.reserve(cfg.budget);
    }

    [[nodiscard]] bool exhausted() const noexcept { return trace_.best.size() >= budget_; }

    template <typename Genotype>
    void record(Scored const& s, Genotype const& genotype)
    {
        if (s.fitness.value < best_) {
            best_ = s.fitness.value;
            trace_.best_phenotype = s.phenotype;
            trace_.best_genotype = describe(genotype);
        }
        trace_.best.push_back(best_);
    }

    Trace finish() && { return std::move(trace_); }

private:
    static std::string describe(UnitFraction const& v) { return v.to_string(false); }
    static std::string describe(Codons const& codons)
    {
        std::string out;
        for (auto c : codons) {
            if (!out.empty()) {
                out += ' ';
            }
            out += std::to_string(c);
        }
        return out;
    }

    std::size_t budget_;
    double best_ = kWorst;
    Trace trace_;
};

template <typename Genotype>
struct Individual {
    Genotype genotype;
    Fitness fitness;
};

template <typename Genotype>
std::size_t tournament(std::vector<Individual<Genotype>> const& population, std::size_t size, Rng& rng)
{
    auto winner = static_cast<std::size_t>(rng.uniform_below(population.size()));
    for (std::size_t i = 1; i < size; ++i) {
        auto const challenger = static_cast<std::size_t>(rng.uniform_below(population.size()));
        if (population[challenger].fitness < population[winner].fitness) {
            winner = challenger;
        }
    }
    return winner;
}

// Generational loop shared by FP-GE and int-GE: tournament selection,
// crossover with probability p else clone, always mutate, elitism.
template <typename Genotype, typename Init, typename Cross, typename Mutate>
Trace generational(SearchConfig const& cfg, Scorer const& scorer, Rng& rng, Init&& init, Cross&& cross, Mutate&& mutate_fn)
{
    Recorder recorder(cfg);
    std::vector<Individual<Genotype>> population;
    population.reserve(cfg.population);
    while (population.size() < cfg.population && !recorder.exhausted()) {
        auto genotype = init();
        auto const scored = scorer(genotype);
        recorder.record(scored, genotype);
        population.push_back({ std::move(genotype), scored.fitness });
    }

    std::vector<std::size_t> order(population.size());
    while (!recorder.exhausted()) {
        std::iota(order.begin(), order.end(), std::size_t { 0 });
        std::stable_sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return population[a].fitness < population[b].fitness; });
        std::vector<Individual<Genotype>> next;
        next.reserve(cfg.population);
        for (std::size_t e = 0; e < cfg.elitism; ++e) {
            next.push_back(population[order[e]]);
        }
        while (next.size() < cfg.population && !recorder.exhausted()) {
            auto const& first = population[tournament(population, cfg.tournament_size, rng)].genotype;
            Genotype child = first;
            if (rng.bernoulli(cfg.crossover_probability)) {
                auto const& second = population[tournament(population, cfg.tournament_size, rng)].genotype;
                child = cross(first, second);
            }
            child = mutate_fn(std::move(child));
            auto const scored = scorer(child);
            recorder.record(scored, child);
            next.push_back({ std::move(child), scored.fitness });
        }
        population = std::move(next);
        order.resize(population.size());
    }
    return std::move(recorder).finish();
}

} // namespace

std::string_view to_string(Algorithm algorithm) noexcept
{
    switch (algorithm) {
    case Algorithm::fpge_dfs: return "fpge-dfs";
    case Algorithm::fpge_bfs: return "fpge-bfs";
    case Algorithm::de_dfs: return "de-dfs";
    case Algorithm::de_bfs: return "de-bfs";
    case Algorithm::rand_dfs: return "rand-dfs";
    case Algorithm::rand_bfs: return "rand-bfs";
    case Algorithm::int_ge: return "int-ge";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view text)
{
    for (auto a : kAllAlgorithms) {
        if (to_string(a) == text) {
            return a;
        }
    }
    throw Error(ErrorKind::usage, "unknown algorithm '" + std::string(text) + "'");
}

DecodeOrder decode_order(Algorithm algorithm) noexcept
{
    switch (algorithm) {
    case Algorithm::fpge_bfs:
    case Algorithm::de_bfs:
    case Algorithm::rand_bfs:
        return DecodeOrder::bfs;
    default:
        return DecodeOrder::dfs;
    }
}

void SearchConfig::validate() const
{
    if (precision == 0 || precision > kMaxPrecision) {
        config_error("precision must be in [1, " + std::to_string(kMaxPrecision) + "]");
    }
    if (budget == 0) {
        config_error("evaluation budget must be positive");
    }
    if (population == 0) {
        config_error("population must be positive");
    }
    bool const generational = algorithm == Algorithm::fpge_dfs || algorithm == Algorithm::fpge_bfs
        || algorithm == Algorithm::int_ge;
    bool const differential = algorithm == Algorithm::de_dfs || algorithm == Algorithm::de_bfs;
    if ((generational || differential) && generations != 0 && generations * population != budget) {
        config_error("budget " + std::to_string(budget) + " != population " + std::to_string(population)
            + " x generations " + std::to_string(generations));
    }
    if (differential && population < 4) {
        config_error("differential evolution needs a population of at least 4");
    }
    if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0)) {
        config_error("crossover probability must be in [0, 1]");
    }
    if (!(codon_mutation_probability >= 0.0 && codon_mutation_probability <= 1.0)) {
        config_error("codon mutation probability must be in [0, 1]");
    }
    if (tournament_size == 0) {
        config_error("tournament size must be positive");
    }
    if (generational && elitism >= population) {
        config_error("elitism must be smaller than the population");
    }
    if (!(de_weight > 0.0 && de_weight <= 2.0)) {
        config_error("differential weight must be in (0, 2]");
    }
    if (genome_length == 0) {
        config_error("genome length must be positive");
    }
    try {
        auto const width = UnitFraction::parse(mutation_half_width, precision);
        if (width.is_one()) {
            config_error("mutation half width must be below 1");
        }
    }
    catch (Error const& e) {
        if (e.kind() == ErrorKind::usage) {
            throw;
        }
        config_error(std::string("mutation half width: ") + e.what());
    }
}

std::string SearchConfig::canonical() const
{
    std::string out;
    auto line = [&](std::string_view key, std::string const& value) {
        out.append(key);
        out += " = ";
        out += value;
        out += '\n';
    };
    line("algo", std::string(to_string(algorithm)));
    line("precision", std::to_string(precision));
    line("pop", std::to_string(population));
    line("generations", std::to_string(generations));
    line("evals", std::to_string(budget));
    line("mutation-width", mutation_half_width);
    line("crossover-rate", format_double(crossover_probability));
    line("tournament", std::to_string(tournament_size));
    line("elitism", std::to_string(elitism));
    line("de-weight", format_double(de_weight));
    line("genome-length", std::to_string(genome_length));
    line("codon-mutation", format_double(codon_mutation_probability));
    line("max-depth", std::to_string(limits.max_depth));
    line("max-nodes", std::to_string(limits.max_nodes));
    line("metric", std::string(to_string(metric)));
    line("seed", std::to_string(seed));
    return out;
}

std::uint64_t SearchConfig::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto c : canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

Trace fpge_evolve(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng)
{
    cfg.validate();
    check_limits(grammar, cfg.limits);
    Scorer const scorer(cfg, grammar, dataset);
    auto const width = UnitFraction::parse(cfg.mutation_half_width, cfg.precision);
    return generational<UnitFraction>(
        cfg, scorer, rng, [&] { return random_unit(rng, cfg.precision); },
        [&](UnitFraction const& a, UnitFraction const& b) { return crossover(a, b, rng); },
        [&](UnitFraction v) { return mutate(v, width, rng); });
}

Trace intge_evolve(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng)
{
    cfg.validate();
    check_limits(grammar, cfg.limits);
    Scorer const scorer(cfg, grammar, dataset);
    return generational<Codons>(
        cfg, scorer, rng, [&] { return random_codons(cfg.genome_length, rng); },
        [&](Codons const& a, Codons const& b) {
            if (a.size() < 2) {
                return a;
            }
            auto const cut = 1 + static_cast<std::size_t>(rng.uniform_below(a.size() - 1));
            return one_point_crossover(a, b, cut);
        },
        [&](Codons genome) {
            mutate_codons(genome, cfg.codon_mutation_probability, rng);
            return genome;
        });
}

Trace de_optimize(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng)
{
    cfg.validate();
    check_limits(grammar, cfg.limits);
    Scorer const scorer(cfg, grammar, dataset);
    Recorder recorder(cfg);
    auto const weight = DeWeight::from_double(cfg.de_weight);
    auto const n = cfg.population;

    std::vector<Individual<UnitFraction>> population;
    population.reserve(n);
    while (population.size() < n && !recorder.exhausted()) {
        auto v = random_unit(rng, cfg.precision);
        auto const scored = scorer(v);
        recorder.record(scored, v);
        population.push_back({ std::move(v), scored.fitness });
    }

    // DE/rand/1. In one dimension binomial crossover always keeps the mutant
    // coordinate, so the trial is the mutant itself. Replacement is
    // synchronous: trials of one generation are built from the previous one.
    while (!recorder.exhausted()) {
        auto next = population;
        for (std::size_t i = 0; i < n && !recorder.exhausted(); ++i) {
            std::size_t r[3];
            for (std::size_t j = 0; j < 3; ++j) {
                do {
                    r[j] = static_cast<std::size_t>(rng.uniform_below(n));
                } while (r[j] == i || std::find(r, r + j, r[j]) != r + j);
            }
            auto trial = de_trial(population[r[0]].genotype, population[r[1]].genotype, population[r[2]].genotype, weight);
            auto const scored = scorer(trial);
            recorder.record(scored, trial);
            if (scored.fitness <= population[i].fitness) {
                next[i] = { std::move(trial), scored.fitness };
            }
        }
        population = std::move(next);
    }
    return std::move(recorder).finish();
}

Trace random_search(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, Rng& rng)
{
    cfg.validate();
    check_limits(grammar, cfg.limits);
    Scorer const scorer(cfg, grammar, dataset);
    Recorder recorder(cfg);
    while (!recorder.exhausted()) {
        auto const v = random_unit(rng, cfg.precision);
        recorder.record(scorer(v), v);
    }
    return std::move(recorder).finish();
}

Trace run_search(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset)
{
    Rng rng(cfg.seed);
    switch (cfg.algorithm) {
    case Algorithm::fpge_dfs:
    case Algorithm::fpge_bfs:
        return fpge_evolve(cfg, grammar, dataset, rng);
    case Algorithm::de_dfs:
    case Algorithm::de_bfs:
        return de_optimize(cfg, grammar, dataset, rng);
    case Algorithm::rand_dfs:
    case Algorithm::rand_bfs:
        return random_search(cfg, grammar, dataset, rng);
    case Algorithm::int_ge:
        return intge_evolve(cfg, grammar, dataset, rng);
    }
    throw std::logic_error("run_search: unhandled algorithm");
}

AggregatedTrace aggregate(std::vector<Trace> runs)
{
    AggregatedTrace result;
    if (runs.empty()) {
        return result;
    }
    auto const length = runs.front().best.size();
    for (auto const& run : runs) {
        if (run.best.size() != length) {
            throw std::invalid_argument("aggregate: traces differ in length");
        }
    }
    result.mean.resize(length);
    result.std.resize(length);
    auto const count = static_cast<double>(runs.size());
    for (std::size_t e = 0; e < length; ++e) {
        std::size_t worst = 0;
        double sum = 0.0;
        for (auto const& run : runs) {
            if (std::isinf(run.best[e])) {
                ++worst;
            }
            else {
                sum += run.best[e];
            }
        }
        if (worst != 0) {
            result.mean[e] = kWorst;
            result.std[e] = worst == runs.size() ? 0.0 : kWorst;
            continue;
        }
        auto const mean = sum / count;
        double sq = 0.0;
        for (auto const& run : runs) {
            sq += (run.best[e] - mean) * (run.best[e] - mean);
        }
        result.mean[e] = mean;
        result.std[e] = std::sqrt(sq / count);
    }
    result.runs = std::move(runs);
    return result;
}

AggregatedTrace run_experiment(SearchConfig const& cfg, Grammar const& grammar, Dataset const& dataset, std::size_t runs,
    unsigned threads, Dataset const* holdout)
{
    if (runs == 0) {
        config_error("run count must be at least 1");
    }
    cfg.validate();
    check_limits(grammar, cfg.limits);
    std::vector<Trace> traces(runs);
    parallel_for(runs, threads, [&](std::size_t r) {
        auto run_cfg = cfg;
        run_cfg.seed = cfg.seed + r;
        traces[r] = run_search(run_cfg, grammar, dataset);
        if (holdout != nullptr && !traces[r].best_phenotype.empty()) {
            traces[r].test_fitness = fitness(traces[r].best_phenotype, *holdout, cfg.metric).value;
        }
    });
    return aggregate(std::move(traces));
}

} // namespace fpge
