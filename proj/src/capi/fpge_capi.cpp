// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/fpge.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <string>

#include "fpge/decoder/decoder.hpp"
#include "fpge/error.hpp"
#include "fpge/evaluator/dataset.hpp"
#include "fpge/evaluator/fitness.hpp"
#include "fpge/grammar/grammar.hpp"
#include "fpge/landscape/scan.hpp"
#include "fpge/precision/rng.hpp"
#include "fpge/search/search.hpp"

struct fpge_grammar {
    std::shared_ptr<fpge::Grammar const> grammar;
    std::string digest;
};

struct fpge_dataset {
    fpge::Dataset dataset;
};

struct fpge_decoding {
    // Keeps the grammar alive: tree text is borrowed from it.
    std::shared_ptr<fpge::Grammar const> grammar;
    fpge::DecodeOutcome outcome;
    std::string phenotype;
    std::string residual;
};

struct fpge_scan {
    fpge::Scan scan;
    std::vector<std::string> vals;

    void index_vals()
    {
        vals.clear();
        vals.reserve(scan.records.size());
        for (auto const& r : scan.records) {
            vals.push_back(r.val.to_string(false));
        }
    }
};

struct fpge_experiment {
    fpge::AggregatedTrace result;
};

namespace {

thread_local std::string g_last_error;

fpge_status fail(fpge_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
fpge_status guarded(Body&& body) noexcept
{
    try {
        body();
        return FPGE_OK;
    }
    catch (fpge::Error const& e) {
        switch (e.kind()) {
        case fpge::ErrorKind::usage: return fail(FPGE_E_INVALID_ARGUMENT, e.what());
        case fpge::ErrorKind::grammar: return fail(FPGE_E_GRAMMAR, e.what());
        case fpge::ErrorKind::data: return fail(FPGE_E_DATA, e.what());
        case fpge::ErrorKind::io: return fail(FPGE_E_IO, e.what());
        }
        return fail(FPGE_E_INTERNAL, e.what());
    }
    catch (std::invalid_argument const& e) {
        return fail(FPGE_E_INVALID_ARGUMENT, e.what());
    }
    catch (std::bad_alloc const&) {
        return fail(FPGE_E_INTERNAL, "out of memory");
    }
    catch (std::exception const& e) {
        return fail(FPGE_E_INTERNAL, e.what());
    }
    catch (...) {
        return fail(FPGE_E_INTERNAL, "unknown error");
    }
}

void require(bool condition, char const* what)
{
    if (!condition) {
        throw std::invalid_argument(what);
    }
}

char* duplicate(std::string const& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fpge::DecodeLimits to_limits(fpge_decode_limits l) { return { l.max_depth, l.max_nodes }; }
fpge::DecodeOrder to_order(fpge_order o) { return o == FPGE_ORDER_BFS ? fpge::DecodeOrder::bfs : fpge::DecodeOrder::dfs; }
fpge::Metric to_metric(fpge_metric m) { return m == FPGE_METRIC_MAE ? fpge::Metric::mae : fpge::Metric::rmse; }

fpge::ScanSettings to_settings(fpge_scan_config const& c)
{
    fpge::ScanSettings s;
    s.order = to_order(c.order);
    s.samples = c.samples;
    s.limits = to_limits(c.limits);
    s.seed = c.seed;
    s.precision = c.precision;
    s.metric = to_metric(c.metric);
    s.threads = c.threads;
    return s;
}

fpge::SearchConfig to_search_config(fpge_search_config const& c)
{
    require(static_cast<unsigned>(c.algorithm) <= FPGE_ALGO_INT_GE, "unknown algorithm");
    fpge::SearchConfig s;
    s.algorithm = fpge::kAllAlgorithms[c.algorithm];
    s.precision = c.precision;
    s.population = c.population;
    s.generations = c.generations;
    s.budget = c.budget;
    s.mutation_half_width = c.mutation_width != nullptr ? c.mutation_width : "0.05";
    s.crossover_probability = c.crossover_probability;
    s.tournament_size = c.tournament_size;
    s.elitism = c.elitism;
    s.de_weight = c.de_weight;
    s.genome_length = c.genome_length;
    s.codon_mutation_probability = c.codon_mutation_probability;
    s.limits = to_limits(c.limits);
    s.metric = to_metric(c.metric);
    s.seed = c.seed;
    return s;
}

void write_text(char const* path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw fpge::Error(fpge::ErrorKind::io, std::string("cannot write '") + path + "'");
    }
    out << text;
    if (!out) {
        throw fpge::Error(fpge::ErrorKind::io, std::string("failed writing '") + path + "'");
    }
}

} // namespace

extern "C" {

const char* fpge_version(void) { return "0.1.0"; }

const char* fpge_last_error(void) { return g_last_error.c_str(); }

void fpge_string_free(char* text) { std::free(text); }

fpge_decode_limits fpge_decode_limits_default(void)
{
    fpge::DecodeLimits const d;
    return { d.max_depth, d.max_nodes };
}

fpge_status fpge_parse_order(const char* name, fpge_order* out)
{
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        *out = fpge::parse_decode_order(name) == fpge::DecodeOrder::bfs ? FPGE_ORDER_BFS : FPGE_ORDER_DFS;
    });
}

fpge_status fpge_parse_algorithm(const char* name, fpge_algorithm* out)
{
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        *out = static_cast<fpge_algorithm>(fpge::parse_algorithm(name));
    });
}

fpge_status fpge_parse_metric(const char* name, fpge_metric* out)
{
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        *out = fpge::parse_metric(name) == fpge::Metric::mae ? FPGE_METRIC_MAE : FPGE_METRIC_RMSE;
    });
}

const char* fpge_algorithm_name(fpge_algorithm algorithm)
{
    if (static_cast<unsigned>(algorithm) > FPGE_ALGO_INT_GE) {
        return "";
    }
    return fpge::to_string(fpge::kAllAlgorithms[algorithm]).data();
}

/* Grammars */

fpge_status fpge_grammar_parse(const char* text, fpge_grammar** out)
{
    return guarded([&] {
        require(text != nullptr && out != nullptr, "null argument");
        auto g = std::make_shared<fpge::Grammar const>(fpge::parse_bnf(text));
        auto digest = fpge::grammar_digest(*g);
        *out = new fpge_grammar { std::move(g), std::move(digest) };
    });
}

fpge_status fpge_grammar_load(const char* path, fpge_grammar** out)
{
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        auto g = std::make_shared<fpge::Grammar const>(fpge::load_bnf(path));
        auto digest = fpge::grammar_digest(*g);
        *out = new fpge_grammar { std::move(g), std::move(digest) };
    });
}

void fpge_grammar_free(fpge_grammar* grammar) { delete grammar; }

size_t fpge_grammar_rule_count(const fpge_grammar* grammar) { return grammar->grammar->rules().size(); }

size_t fpge_grammar_production_count(const fpge_grammar* grammar) { return grammar->grammar->production_count(); }

const char* fpge_grammar_rule_name(const fpge_grammar* grammar, size_t rule)
{
    auto const& rules = grammar->grammar->rules();
    return rule < rules.size() ? rules[rule].name.c_str() : "";
}

size_t fpge_grammar_rule_size(const fpge_grammar* grammar, size_t rule)
{
    auto const& rules = grammar->grammar->rules();
    return rule < rules.size() ? rules[rule].productions.size() : 0;
}

const char* fpge_grammar_digest(const fpge_grammar* grammar) { return grammar->digest.c_str(); }

fpge_status fpge_grammar_serialize(const fpge_grammar* grammar, char** out)
{
    return guarded([&] {
        require(grammar != nullptr && out != nullptr, "null argument");
        *out = duplicate(fpge::serialize_bnf(*grammar->grammar));
    });
}

fpge_status fpge_grammar_min_depth(const fpge_grammar* grammar, const char* rule, uint32_t* out)
{
    return guarded([&] {
        require(grammar != nullptr && rule != nullptr && out != nullptr, "null argument");
        *out = fpge::min_completion_depth(*grammar->grammar, rule);
    });
}

fpge_status fpge_grammar_factor(const fpge_grammar* grammar, const char* rule, const char* new_name, fpge_grammar** out)
{
    return guarded([&] {
        require(grammar != nullptr && rule != nullptr && new_name != nullptr && out != nullptr, "null argument");
        auto g = std::make_shared<fpge::Grammar const>(fpge::factor_rule(*grammar->grammar, rule, new_name));
        auto digest = fpge::grammar_digest(*g);
        *out = new fpge_grammar { std::move(g), std::move(digest) };
    });
}

/* Decoding */

namespace {

fpge_decoding* wrap_decoding(std::shared_ptr<fpge::Grammar const> grammar, fpge::DecodeOutcome outcome, bool has_residual)
{
    auto d = std::make_unique<fpge_decoding>();
    d->grammar = std::move(grammar);
    d->outcome = std::move(outcome);
    if (d->outcome.valid()) {
        d->phenotype = fpge::render(d->outcome.as_valid().tree);
        if (has_residual) {
            d->residual = d->outcome.as_valid().final_residual.to_string(false);
        }
    }
    return d.release();
}

} // namespace

fpge_status fpge_decode(const fpge_grammar* grammar, const char* val, uint32_t precision, fpge_order order,
    fpge_decode_limits limits, fpge_decoding** out)
{
    return guarded([&] {
        require(grammar != nullptr && val != nullptr && out != nullptr, "null argument");
        auto const v = fpge::UnitFraction::parse(val, precision);
        auto outcome = fpge::decode(v, *grammar->grammar, to_order(order), to_limits(limits));
        *out = wrap_decoding(grammar->grammar, std::move(outcome), true);
    });
}

fpge_status fpge_decode_codons(const fpge_grammar* grammar, const uint32_t* codons, size_t count,
    fpge_decode_limits limits, fpge_decoding** out)
{
    return guarded([&] {
        require(grammar != nullptr && out != nullptr && (codons != nullptr || count == 0), "null argument");
        auto outcome = fpge::codon_decode(std::span<std::uint32_t const>(codons, count), *grammar->grammar, to_limits(limits));
        *out = wrap_decoding(grammar->grammar, std::move(outcome), false);
    });
}

void fpge_decoding_free(fpge_decoding* decoding) { delete decoding; }

int fpge_decoding_valid(const fpge_decoding* decoding) { return decoding->outcome.valid() ? 1 : 0; }

const char* fpge_decoding_invalid_reason(const fpge_decoding* decoding)
{
    return decoding->outcome.valid() ? "" : fpge::to_string(decoding->outcome.reason()).data();
}

const char* fpge_decoding_phenotype(const fpge_decoding* decoding) { return decoding->phenotype.c_str(); }

size_t fpge_decoding_node_count(const fpge_decoding* decoding)
{
    return decoding->outcome.valid() ? decoding->outcome.as_valid().tree.node_count() : 0;
}

const char* fpge_decoding_residual(const fpge_decoding* decoding) { return decoding->residual.c_str(); }

size_t fpge_decoding_choice_count(const fpge_decoding* decoding) { return decoding->outcome.choices.size(); }

const uint32_t* fpge_decoding_choices(const fpge_decoding* decoding) { return decoding->outcome.choices.data(); }

/* Datasets */

fpge_status fpge_dataset_generate(const char* benchmark, size_t rows, uint64_t seed, fpge_dataset** out)
{
    return guarded([&] {
        require(benchmark != nullptr && out != nullptr, "null argument");
        fpge::Rng rng(seed);
        auto ds = fpge::generate_dataset(fpge::parse_benchmark(benchmark), rows, rng);
        ds.id += ":seed=" + std::to_string(seed);
        *out = new fpge_dataset { std::move(ds) };
    });
}

fpge_status fpge_dataset_load_csv(const char* path, fpge_dataset** out)
{
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new fpge_dataset { fpge::load_csv(path) };
    });
}

fpge_status fpge_dataset_write_csv(const fpge_dataset* dataset, const char* path, const char* preamble)
{
    return guarded([&] {
        require(dataset != nullptr && path != nullptr, "null argument");
        fpge::write_csv(dataset->dataset, path, preamble != nullptr ? preamble : "");
    });
}

void fpge_dataset_free(fpge_dataset* dataset) { delete dataset; }

size_t fpge_dataset_rows(const fpge_dataset* dataset) { return dataset->dataset.rows(); }

size_t fpge_dataset_variables(const fpge_dataset* dataset) { return dataset->dataset.columns(); }

const char* fpge_dataset_id(const fpge_dataset* dataset) { return dataset->dataset.id.c_str(); }

fpge_status fpge_dataset_holdout(const fpge_dataset* dataset, double fraction, fpge_dataset** train, fpge_dataset** test)
{
    return guarded([&] {
        require(dataset != nullptr && train != nullptr && test != nullptr, "null argument");
        auto [a, b] = fpge::holdout_split(dataset->dataset, fraction);
        auto first = std::make_unique<fpge_dataset>(fpge_dataset { std::move(a) });
        auto second = std::make_unique<fpge_dataset>(fpge_dataset { std::move(b) });
        *train = first.release();
        *test = second.release();
    });
}

fpge_status fpge_fitness(const char* phenotype, const fpge_dataset* dataset, fpge_metric metric, double* out)
{
    return guarded([&] {
        require(phenotype != nullptr && dataset != nullptr && out != nullptr, "null argument");
        *out = fpge::fitness(phenotype, dataset->dataset, to_metric(metric)).value;
    });
}

/* Scans */

void fpge_scan_config_init(fpge_scan_config* config)
{
    fpge::ScanSettings const s;
    config->order = FPGE_ORDER_DFS;
    config->samples = s.samples;
    config->limits = fpge_decode_limits_default();
    config->seed = 0;
    config->precision = s.precision;
    config->metric = FPGE_METRIC_RMSE;
    config->threads = 1;
}

void fpge_svg_options_init(fpge_svg_options* options)
{
    fpge::SvgOptions const o;
    options->width = o.width;
    options->height = o.height;
    options->title = nullptr;
    options->log_fitness = o.log_fitness ? 1 : 0;
    options->show_fitness = o.show_fitness ? 1 : 0;
    options->show_nodes = o.show_nodes ? 1 : 0;
    options->mark_best = o.mark_best ? 1 : 0;
}

fpge_status fpge_scan_run(const fpge_grammar* grammar, const fpge_dataset* dataset, const fpge_scan_config* config,
    fpge_scan** out)
{
    return guarded([&] {
        require(grammar != nullptr && dataset != nullptr && config != nullptr && out != nullptr, "null argument");
        auto s = std::make_unique<fpge_scan>();
        s->scan = fpge::scan(*grammar->grammar, dataset->dataset, to_settings(*config));
        s->index_vals();
        *out = s.release();
    });
}

fpge_status fpge_scan_load_csv(const char* path, fpge_scan** out)
{
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        auto s = std::make_unique<fpge_scan>();
        s->scan = fpge::load_scan_csv(path);
        s->index_vals();
        *out = s.release();
    });
}

fpge_status fpge_scan_write_csv(const fpge_scan* scan, const char* path, const char* preamble)
{
    return guarded([&] {
        require(scan != nullptr && path != nullptr, "null argument");
        fpge::write_scan_csv(scan->scan, path, preamble != nullptr ? preamble : "");
    });
}

fpge_status fpge_scan_write_svg(const fpge_scan* scan, const char* path, const fpge_svg_options* options)
{
    return guarded([&] {
        require(scan != nullptr && path != nullptr, "null argument");
        fpge::SvgOptions o;
        if (options != nullptr) {
            o.width = options->width;
            o.height = options->height;
            o.title = options->title != nullptr ? options->title : "";
            o.log_fitness = options->log_fitness != 0;
            o.show_fitness = options->show_fitness != 0;
            o.show_nodes = options->show_nodes != 0;
            o.mark_best = options->mark_best != 0;
        }
        fpge::write_svg(scan->scan, path, o);
    });
}

void fpge_scan_free(fpge_scan* scan) { delete scan; }

size_t fpge_scan_size(const fpge_scan* scan) { return scan->scan.records.size(); }

fpge_status fpge_scan_record_at(const fpge_scan* scan, size_t index, fpge_scan_record* out)
{
    return guarded([&] {
        require(scan != nullptr && out != nullptr, "null argument");
        require(index < scan->scan.records.size(), "record index out of range");
        auto const& r = scan->scan.records[index];
        out->val = scan->vals[index].c_str();
        out->fitness = r.fitness.value;
        out->nodes = r.nodes;
        out->valid = r.valid ? 1 : 0;
        out->invalid_reason = r.invalid_reason ? fpge::to_string(*r.invalid_reason).data() : "";
    });
}

fpge_status fpge_scan_best(const fpge_scan* scan, size_t* index)
{
    return guarded([&] {
        require(scan != nullptr && index != nullptr, "null argument");
        *index = fpge::best(scan->scan).first;
    });
}

fpge_status fpge_scan_zoom(const fpge_scan* scan, size_t center, size_t count, fpge_scan** out)
{
    return guarded([&] {
        require(scan != nullptr && out != nullptr, "null argument");
        auto s = std::make_unique<fpge_scan>();
        s->scan = fpge::zoom(scan->scan, center, count);
        s->index_vals();
        *out = s.release();
    });
}

fpge_status fpge_scan_rescan(const fpge_scan* window, const fpge_grammar* grammar, const fpge_dataset* dataset,
    const fpge_scan_config* config, size_t samples, fpge_scan** out)
{
    return guarded([&] {
        require(window != nullptr && grammar != nullptr && dataset != nullptr && config != nullptr && out != nullptr,
            "null argument");
        auto s = std::make_unique<fpge_scan>();
        s->scan = fpge::rescan(window->scan, *grammar->grammar, dataset->dataset, to_settings(*config), samples);
        s->index_vals();
        *out = s.release();
    });
}

/* Experiments */

void fpge_search_config_init(fpge_search_config* config)
{
    fpge::SearchConfig const s;
    config->algorithm = FPGE_ALGO_FPGE_DFS;
    config->precision = s.precision;
    config->population = s.population;
    config->generations = s.generations;
    config->budget = s.budget;
    config->mutation_width = "0.05";
    config->crossover_probability = s.crossover_probability;
    config->tournament_size = s.tournament_size;
    config->elitism = s.elitism;
    config->de_weight = s.de_weight;
    config->genome_length = s.genome_length;
    config->codon_mutation_probability = s.codon_mutation_probability;
    config->limits = fpge_decode_limits_default();
    config->metric = FPGE_METRIC_RMSE;
    config->seed = 0;
}

fpge_status fpge_search_config_validate(const fpge_search_config* config)
{
    return guarded([&] {
        require(config != nullptr, "null argument");
        to_search_config(*config).validate();
    });
}

fpge_status fpge_search_config_describe(const fpge_search_config* config, char** out)
{
    return guarded([&] {
        require(config != nullptr && out != nullptr, "null argument");
        *out = duplicate(to_search_config(*config).canonical());
    });
}

fpge_status fpge_experiment_run(const fpge_grammar* grammar, const fpge_dataset* dataset, const fpge_dataset* holdout,
    const fpge_search_config* config, size_t runs, unsigned threads, fpge_experiment** out)
{
    return guarded([&] {
        require(grammar != nullptr && dataset != nullptr && config != nullptr && out != nullptr, "null argument");
        auto e = std::make_unique<fpge_experiment>();
        e->result = fpge::run_experiment(to_search_config(*config), *grammar->grammar, dataset->dataset, runs, threads,
            holdout != nullptr ? &holdout->dataset : nullptr);
        *out = e.release();
    });
}

void fpge_experiment_free(fpge_experiment* experiment) { delete experiment; }

size_t fpge_experiment_runs(const fpge_experiment* experiment) { return experiment->result.runs.size(); }

size_t fpge_experiment_length(const fpge_experiment* experiment) { return experiment->result.mean.size(); }

const double* fpge_experiment_mean(const fpge_experiment* experiment) { return experiment->result.mean.data(); }

const double* fpge_experiment_std(const fpge_experiment* experiment) { return experiment->result.std.data(); }

const double* fpge_experiment_run_trace(const fpge_experiment* experiment, size_t run)
{
    auto const& runs = experiment->result.runs;
    return run < runs.size() ? runs[run].best.data() : nullptr;
}

const char* fpge_experiment_best_phenotype(const fpge_experiment* experiment, size_t run)
{
    auto const& runs = experiment->result.runs;
    return run < runs.size() ? runs[run].best_phenotype.c_str() : "";
}

const char* fpge_experiment_best_genotype(const fpge_experiment* experiment, size_t run)
{
    auto const& runs = experiment->result.runs;
    return run < runs.size() ? runs[run].best_genotype.c_str() : "";
}

double fpge_experiment_test_fitness(const fpge_experiment* experiment, size_t run)
{
    auto const& runs = experiment->result.runs;
    if (run >= runs.size() || !runs[run].test_fitness) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return *runs[run].test_fitness;
}

fpge_status fpge_experiment_write_csv(const fpge_experiment* experiment, const char* path, int per_run,
    const char* preamble)
{
    return guarded([&] {
        require(experiment != nullptr && path != nullptr, "null argument");
        auto const& r = experiment->result;
        std::string text = preamble != nullptr ? preamble : "";
        for (std::size_t i = 0; i < r.runs.size(); ++i) {
            auto const& run = r.runs[i];
            text += "# run " + std::to_string(i) + ": seed=" + std::to_string(run.seed) + " config-hash=";
            char hash[17];
            std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(run.config_hash));
            text += hash;
            text += " best=" + run.best_phenotype;
            if (run.test_fitness) {
                text += " test=" + fpge::format_double(*run.test_fitness);
            }
            text += '\n';
        }
        if (per_run != 0) {
            text += "eval,run,best\n";
            for (std::size_t i = 0; i < r.runs.size(); ++i) {
                for (std::size_t e = 0; e < r.runs[i].best.size(); ++e) {
                    text += std::to_string(e + 1) + "," + std::to_string(i) + "," + fpge::format_double(r.runs[i].best[e]) + "\n";
                }
            }
        }
        else {
            text += "eval,mean_best,std_best\n";
            for (std::size_t e = 0; e < r.mean.size(); ++e) {
                text += std::to_string(e + 1) + "," + fpge::format_double(r.mean[e]) + "," + fpge::format_double(r.std[e]) + "\n";
            }
        }
        write_text(path, text);
    });
}

} // extern "C"
