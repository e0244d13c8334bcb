// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

// Command-line front end. Talks to the library only through fpge.h.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpge/fpge.h"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_failure = 2, exit_internal = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
    ApiError(fpge_status s, std::string const& message)
        : std::runtime_error(message)
        , status(s)
    {
    }
    fpge_status status;
};

void check(fpge_status status)
{
    if (status != FPGE_OK) {
        throw ApiError(status, fpge_last_error());
    }
}

struct Free {
    void operator()(fpge_grammar* p) const { fpge_grammar_free(p); }
    void operator()(fpge_dataset* p) const { fpge_dataset_free(p); }
    void operator()(fpge_decoding* p) const { fpge_decoding_free(p); }
    void operator()(fpge_scan* p) const { fpge_scan_free(p); }
    void operator()(fpge_experiment* p) const { fpge_experiment_free(p); }
    void operator()(char* p) const { fpge_string_free(p); }
};

template <typename T>
using Owned = std::unique_ptr<T, Free>;

template <typename T, typename Fn>
Owned<T> make(Fn&& fn)
{
    T* raw = nullptr;
    check(fn(&raw));
    return Owned<T>(raw);
}

// Base directories for relative paths; empty means the working directory.
struct Paths {
    fs::path inputs;
    fs::path outputs;

    [[nodiscard]] std::string input(std::string const& p) const { return resolve(inputs, p); }
    [[nodiscard]] std::string output(std::string const& p) const { return resolve(outputs, p); }

private:
    static std::string resolve(fs::path const& base, std::string const& p)
    {
        if (p.empty() || base.empty() || fs::path(p).is_absolute()) {
            return p;
        }
        return (base / p).string();
    }
};

struct Params {
    std::uint64_t seed = 1;
    std::uint32_t precision = 150;
    unsigned threads = 0;
    std::string config;

    std::string file;
    std::string rule = "e";
    std::string new_rule = "r";
    std::string out;

    std::string val;
    std::string codons;
    std::string order = "dfs";
    std::uint32_t max_depth = 15;
    std::uint32_t max_nodes = 2000;

    std::string benchmark;
    std::string data;
    std::size_t rows = 200;
    std::uint64_t data_seed = 1;
    std::string metric = "rmse";

    std::size_t samples = 25'000;
    std::size_t zoom_best = 0;
    std::string zoom_out;
    bool rescan = false;
    std::string svg;

    std::string scan;
    std::string title;
    bool log_fitness = false;

    std::string algo;
    std::size_t runs = 30;
    std::size_t evals = 25'000;
    std::size_t pop = 500;
    std::size_t generations = 0;
    std::string mutation_width = "0.05";
    double crossover = 0.75;
    std::size_t tournament = 2;
    std::size_t elitism = 1;
    double de_weight = 0.5;
    std::size_t genome_length = 200;
    double codon_mutation = 0.01;
    double holdout = 0.0;
    bool per_run = false;
    bool dry_run = false;

    std::string protocol;
    std::string out_dir;
};

// Options never echoed into output metadata: they name files or only
// affect speed.
bool is_unechoed(std::string const& name)
{
    return name == "config" || name == "out" || name == "zoom-out" || name == "svg" || name == "threads"
        || name == "help" || name == "dry-run";
}

struct Cli {
    CLI::App app { "Floating-point grammatical evolution: decoding, landscapes and search.", "fpge" };
    Params p;
    CLI::App* grammar = nullptr;
    CLI::App* grammar_check = nullptr;
    CLI::App* grammar_factor = nullptr;
    CLI::App* decode = nullptr;
    CLI::App* dataset = nullptr;
    CLI::App* dataset_gen = nullptr;
    CLI::App* scan = nullptr;
    CLI::App* plot = nullptr;
    CLI::App* search = nullptr;
    CLI::App* reproduce = nullptr;

    Cli()
    {
        app.option_defaults()->always_capture_default();
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(fpge_version()));
        app.add_option("--seed", p.seed, "Random seed");
        app.add_option("--precision", p.precision, "Decimal digits of the genotype")->check(CLI::Range(1U, 100000U));
        app.add_option("--threads", p.threads, "Worker threads (0 = all cores); results do not depend on it");
        app.add_option("--config", p.config,
            "File of `key = value` lines; flags override it. Output files of this tool work too");

        grammar = app.add_subcommand("grammar", "Inspect and rewrite grammars");
        grammar->require_subcommand(1);
        grammar_check = grammar->add_subcommand("check", "Validate a grammar and summarise it");
        grammar_check->add_option("file", p.file, "Grammar file")->required();
        grammar_factor = grammar->add_subcommand("factor", "Move a rule's recursive productions into a new rule");
        grammar_factor->add_option("file", p.file, "Grammar file")->required();
        grammar_factor->add_option("--rule", p.rule, "Rule to factor");
        grammar_factor->add_option("--new", p.new_rule, "Name of the new rule");
        grammar_factor->add_option("--out", p.out, "Output file (default: standard output)");

        decode = app.add_subcommand("decode", "Decode one genotype and print its phenotype");
        decode->add_option("--grammar", p.file, "Grammar file");
        auto* val = decode->add_option("--val", p.val, "Genotype as a decimal in [0, 1]");
        auto* codons = decode->add_option("--codons", p.codons, "Integer codons, comma separated");
        val->excludes(codons);
        decode->add_option("--order", p.order, "dfs or bfs")->check(CLI::IsMember({ "dfs", "bfs" }));
        add_limits(decode);

        dataset = app.add_subcommand("dataset", "Synthetic benchmark data");
        dataset->require_subcommand(1);
        dataset_gen = dataset->add_subcommand("gen", "Generate a benchmark dataset");
        dataset_gen->add_option("--benchmark", p.benchmark, "keijzer6, paige1 or vlad4");
        dataset_gen->add_option("--n", p.rows, "Rows");
        dataset_gen->add_option("--out", p.out, "Output CSV")->required();

        scan = app.add_subcommand("scan", "Sample the genotype interval evenly");
        scan->add_option("--grammar", p.file, "Grammar file");
        scan->add_option("--order", p.order, "dfs or bfs")->check(CLI::IsMember({ "dfs", "bfs" }));
        add_data(scan);
        scan->add_option("--samples", p.samples, "Number of samples");
        add_limits(scan);
        scan->add_option("--out", p.out, "Output CSV")->required();
        auto* zoom = scan->add_option("--zoom-best", p.zoom_best, "Also extract this many records around the best");
        scan->add_option("--zoom-out", p.zoom_out, "Output CSV for the zoom window")->needs(zoom);
        scan->add_flag("--rescan", p.rescan, "Resample the zoom interval instead of slicing the scan")->needs(zoom);
        scan->add_option("--svg", p.svg, "Also render the scan as SVG");

        plot = app.add_subcommand("plot", "Render a scan CSV as an SVG chart");
        plot->add_option("--scan", p.scan, "Scan CSV");
        plot->add_option("--out", p.out, "Output SVG")->required();
        plot->add_option("--zoom-best", p.zoom_best, "Plot only this many records around the best");
        plot->add_option("--title", p.title, "Chart title");
        plot->add_flag("--log", p.log_fitness, "Logarithmic fitness axis");

        search = app.add_subcommand("search", "Run repeated searches and write the best-so-far trace");
        search->add_option("--algo", p.algo, "fpge-dfs, fpge-bfs, de-dfs, de-bfs, rand-dfs, rand-bfs or int-ge");
        search->add_option("--grammar", p.file, "Grammar file");
        add_data(search);
        search->add_option("--runs", p.runs, "Independent runs; run r uses seed + r");
        search->add_option("--evals", p.evals, "Fitness evaluations per run");
        search->add_option("--pop", p.pop, "Population size");
        search->add_option("--generations", p.generations, "Generations (0 = evals / pop)");
        search->add_option("--mutation-width", p.mutation_width, "Half width of genotype mutation");
        search->add_option("--crossover-rate", p.crossover, "Crossover probability");
        search->add_option("--tournament", p.tournament, "Tournament size");
        search->add_option("--elitism", p.elitism, "Elite individuals kept per generation");
        search->add_option("--de-weight", p.de_weight, "Differential weight F");
        search->add_option("--genome-length", p.genome_length, "Codons per int-ge genome");
        search->add_option("--codon-mutation", p.codon_mutation, "Per-codon mutation probability (int-ge)");
        add_limits(search);
        search->add_option("--holdout", p.holdout, "Trailing fraction of rows held out for testing (0 = none)");
        search->add_flag("--per-run", p.per_run, "Write eval,run,best instead of mean and std");
        search->add_flag("--dry-run", p.dry_run, "Validate and describe the configuration without running");
        search->add_option("--out", p.out, "Output trace CSV");

        reproduce = app.add_subcommand("reproduce", "Run every command listed in a protocol file");
        reproduce->add_option("protocol", p.protocol, "Protocol file, one command per line")->required();
        reproduce->add_option("--out-dir", p.out_dir, "Directory for outputs (default: the protocol's directory)");

        for (auto* sub : { grammar, grammar_check, grammar_factor, decode, dataset, dataset_gen, scan, plot, search,
                 reproduce }) {
            sub->fallthrough();
        }
    }

    void add_limits(CLI::App* sub)
    {
        sub->add_option("--max-depth", p.max_depth, "Maximum tree depth (root = 1)");
        sub->add_option("--max-nodes", p.max_nodes, "Maximum tree nodes");
    }

    void add_data(CLI::App* sub)
    {
        auto* data = sub->add_option("--data", p.data, "Dataset CSV");
        auto* bench = sub->add_option("--benchmark", p.benchmark, "Generate this benchmark instead");
        data->excludes(bench);
        sub->add_option("--rows", p.rows, "Rows of the generated benchmark")->needs(bench);
        sub->add_option("--data-seed", p.data_seed, "Seed of the generated benchmark")->needs(bench);
        sub->add_option("--metric", p.metric, "rmse or mae")->check(CLI::IsMember({ "rmse", "mae" }));
    }

    [[nodiscard]] CLI::App* leaf() const
    {
        for (auto* sub : { grammar_check, grammar_factor, decode, dataset_gen, scan, plot, search, reproduce }) {
            if (sub->parsed()) {
                return sub;
            }
        }
        return nullptr;
    }
};

std::string trim(std::string const& s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string command_name(CLI::App const* sub)
{
    auto const* parent = sub->get_parent();
    if (parent != nullptr && parent->get_parent() != nullptr) {
        return parent->get_name() + " " + sub->get_name();
    }
    return sub->get_name();
}

CLI::Option* find_option(Cli& cli, CLI::App* sub, std::string const& key)
{
    auto* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
        opt = cli.app.get_option_no_throw("--" + key);
    }
    return opt;
}

// Reads `key = value` settings. A file containing `#@` lines (an output of
// this tool) contributes only those lines.
std::vector<std::pair<std::string, std::string>> read_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ApiError(FPGE_E_IO, "cannot read config '" + path + "'");
    }
    std::vector<std::string> lines;
    bool embedded = false;
    for (std::string line; std::getline(in, line);) {
        embedded = embedded || line.starts_with("#@");
        lines.push_back(line);
    }
    std::vector<std::pair<std::string, std::string>> items;
    int line_no = 0;
    for (auto const& raw : lines) {
        ++line_no;
        std::string line;
        if (embedded) {
            if (!raw.starts_with("#@")) {
                continue;
            }
            line = trim(raw.substr(2));
        }
        else {
            line = trim(raw);
            if (line.empty() || line.front() == '#') {
                continue;
            }
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected `key = value`");
        }
        items.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return items;
}

void apply_config(Cli& cli, CLI::App* sub)
{
    for (auto const& [key, value] : read_config(cli.p.config)) {
        if (key == "command") {
            if (value != command_name(sub)) {
                throw UsageError("config is for '" + value + "', not '" + command_name(sub) + "'");
            }
            continue;
        }
        auto* opt = find_option(cli, sub, key);
        if (opt == nullptr || is_unechoed(key) || opt->get_positional()) {
            throw UsageError("unknown config key '" + key + "' for " + command_name(sub));
        }
        if (opt->count() > 0) {
            continue;
        }
        opt->add_result(value);
        opt->run_callback();
    }
}

// `#@ key = value` lines capturing the effective configuration.
std::string echo_config(Cli& cli, CLI::App* sub)
{
    std::string out = "#@ command = " + command_name(sub) + "\n";
    auto emit = [&](CLI::Option const* opt) {
        auto const name = opt->get_single_name();
        if (opt->get_positional() || is_unechoed(name)) {
            return;
        }
        std::string value;
        if (opt->count() > 0) {
            for (auto const& r : opt->results()) {
                value += value.empty() ? r : "," + r;
            }
        }
        else if (opt->get_type_size() != 0) {
            value = opt->get_default_str();
        }
        if (!value.empty()) {
            out += "#@ " + name + " = " + value + "\n";
        }
    };
    for (auto const* opt : cli.app.get_options()) {
        emit(opt);
    }
    for (auto const* opt : sub->get_options()) {
        emit(opt);
    }
    return out;
}

fpge_decode_limits limits_of(Params const& p) { return { p.max_depth, p.max_nodes }; }

fpge_order order_of(Params const& p)
{
    fpge_order order {};
    check(fpge_parse_order(p.order.c_str(), &order));
    return order;
}

fpge_metric metric_of(Params const& p)
{
    fpge_metric metric {};
    check(fpge_parse_metric(p.metric.c_str(), &metric));
    return metric;
}

Owned<fpge_grammar> load_grammar(std::string const& path)
{
    return make<fpge_grammar>([&](fpge_grammar** out) { return fpge_grammar_load(path.c_str(), out); });
}

Owned<fpge_dataset> load_data(Params const& p, Paths const& paths)
{
    if (!p.data.empty()) {
        auto const path = paths.input(p.data);
        return make<fpge_dataset>([&](fpge_dataset** out) { return fpge_dataset_load_csv(path.c_str(), out); });
    }
    if (p.benchmark.empty()) {
        throw UsageError("one of --data or --benchmark is required");
    }
    return make<fpge_dataset>(
        [&](fpge_dataset** out) { return fpge_dataset_generate(p.benchmark.c_str(), p.rows, p.data_seed, out); });
}

std::vector<std::uint32_t> parse_codons(std::string const& text)
{
    std::vector<std::uint32_t> codons;
    std::stringstream in(text);
    for (std::string cell; std::getline(in, cell, ',');) {
        cell = trim(cell);
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(cell, &used);
        }
        catch (std::exception const&) {
            used = 0;
        }
        if (cell.empty() || used != cell.size() || value > UINT32_MAX) {
            throw UsageError("--codons: '" + cell + "' is not a codon");
        }
        codons.push_back(static_cast<std::uint32_t>(value));
    }
    return codons;
}

int cmd_grammar_check(Params const& p, Paths const& paths, std::ostream& out)
{
    auto const g = load_grammar(paths.input(p.file));
    auto const* head = fpge_grammar_rule_name(g.get(), 0);
    std::uint32_t depth = 0;
    check(fpge_grammar_min_depth(g.get(), head, &depth));
    out << "ok: " << fpge_grammar_rule_count(g.get()) << " rules, " << fpge_grammar_production_count(g.get())
        << " productions\n";
    out << "head: <" << head << ">, minimum depth " << depth << "\n";
    for (std::size_t r = 0; r < fpge_grammar_rule_count(g.get()); ++r) {
        out << "  <" << fpge_grammar_rule_name(g.get(), r) << ">: " << fpge_grammar_rule_size(g.get(), r)
            << " productions\n";
    }
    out << "digest: " << fpge_grammar_digest(g.get()) << "\n";
    return exit_ok;
}

int cmd_grammar_factor(Params const& p, Paths const& paths, std::ostream& out)
{
    auto const g = load_grammar(paths.input(p.file));
    auto const factored = make<fpge_grammar>([&](fpge_grammar** o) {
        return fpge_grammar_factor(g.get(), p.rule.c_str(), p.new_rule.c_str(), o);
    });
    auto const text = make<char>([&](char** o) { return fpge_grammar_serialize(factored.get(), o); });
    if (p.out.empty()) {
        out << text.get();
        return exit_ok;
    }
    auto const path = paths.output(p.out);
    std::ofstream file(path, std::ios::binary);
    if (!(file << text.get())) {
        throw ApiError(FPGE_E_IO, "cannot write '" + path + "'");
    }
    return exit_ok;
}

int cmd_decode(Params const& p, Paths const& paths, std::ostream& out)
{
    auto const g = load_grammar(paths.input(p.file));
    Owned<fpge_decoding> d;
    if (!p.codons.empty()) {
        auto const codons = parse_codons(p.codons);
        d = make<fpge_decoding>([&](fpge_decoding** o) {
            return fpge_decode_codons(g.get(), codons.data(), codons.size(), limits_of(p), o);
        });
    }
    else if (!p.val.empty()) {
        d = make<fpge_decoding>([&](fpge_decoding** o) {
            return fpge_decode(g.get(), p.val.c_str(), p.precision, order_of(p), limits_of(p), o);
        });
    }
    else {
        throw UsageError("one of --val or --codons is required");
    }
    if (fpge_decoding_valid(d.get()) != 0) {
        out << fpge_decoding_phenotype(d.get()) << "\n";
        out << "nodes: " << fpge_decoding_node_count(d.get()) << "\n";
        out << "valid: yes\n";
    }
    else {
        out << "invalid\n";
        out << "nodes: 0\n";
        out << "valid: no (" << fpge_decoding_invalid_reason(d.get()) << ")\n";
    }
    out << "choices:";
    auto const* choices = fpge_decoding_choices(d.get());
    for (std::size_t i = 0; i < fpge_decoding_choice_count(d.get()); ++i) {
        out << ' ' << choices[i];
    }
    out << "\n";
    if (*fpge_decoding_residual(d.get()) != '\0') {
        out << "residual: " << fpge_decoding_residual(d.get()) << "\n";
    }
    return exit_ok;
}

int cmd_dataset_gen(Cli& cli, Paths const& paths, std::ostream& out)
{
    auto const& p = cli.p;
    auto const ds = make<fpge_dataset>(
        [&](fpge_dataset** o) { return fpge_dataset_generate(p.benchmark.c_str(), p.rows, p.seed, o); });
    auto const preamble = echo_config(cli, cli.dataset_gen);
    auto const path = paths.output(p.out);
    check(fpge_dataset_write_csv(ds.get(), path.c_str(), preamble.c_str()));
    out << "wrote " << path << " (" << fpge_dataset_rows(ds.get()) << " rows)\n";
    return exit_ok;
}

fpge_scan_config scan_config_of(Params const& p)
{
    fpge_scan_config c;
    fpge_scan_config_init(&c);
    c.order = order_of(p);
    c.samples = p.samples;
    c.limits = limits_of(p);
    c.seed = p.seed;
    c.precision = p.precision;
    c.metric = metric_of(p);
    c.threads = p.threads;
    return c;
}

void write_plot(fpge_scan const* s, std::string const& path, std::string const& title, bool log_fitness)
{
    fpge_svg_options o;
    fpge_svg_options_init(&o);
    o.title = title.empty() ? nullptr : title.c_str();
    o.log_fitness = log_fitness ? 1 : 0;
    check(fpge_scan_write_svg(s, path.c_str(), &o));
}

int cmd_scan(Cli& cli, Paths const& paths, std::ostream& out)
{
    auto const& p = cli.p;
    if (p.samples == 0) {
        throw UsageError("--samples must be at least 1");
    }
    auto const g = load_grammar(paths.input(p.file));
    auto const ds = load_data(p, paths);
    auto const config = scan_config_of(p);
    auto const s = make<fpge_scan>([&](fpge_scan** o) { return fpge_scan_run(g.get(), ds.get(), &config, o); });
    auto const preamble = echo_config(cli, cli.scan);
    auto const path = paths.output(p.out);
    check(fpge_scan_write_csv(s.get(), path.c_str(), preamble.c_str()));
    out << "wrote " << path << " (" << fpge_scan_size(s.get()) << " samples)\n";
    if (!p.svg.empty()) {
        write_plot(s.get(), paths.output(p.svg), p.title, false);
    }
    if (p.zoom_best == 0) {
        return exit_ok;
    }
    std::size_t best = 0;
    check(fpge_scan_best(s.get(), &best));
    auto window = make<fpge_scan>([&](fpge_scan** o) { return fpge_scan_zoom(s.get(), best, p.zoom_best, o); });
    if (p.rescan) {
        window = make<fpge_scan>([&](fpge_scan** o) {
            return fpge_scan_rescan(window.get(), g.get(), ds.get(), &config, p.zoom_best, o);
        });
    }
    auto const zoom_path = paths.output(p.zoom_out.empty() ? p.out + ".zoom.csv" : p.zoom_out);
    check(fpge_scan_write_csv(window.get(), zoom_path.c_str(), preamble.c_str()));
    out << "wrote " << zoom_path << " (" << fpge_scan_size(window.get()) << " samples)\n";
    return exit_ok;
}

int cmd_plot(Params const& p, Paths const& paths, std::ostream& out)
{
    auto const in = paths.input(p.scan);
    auto s = make<fpge_scan>([&](fpge_scan** o) { return fpge_scan_load_csv(in.c_str(), o); });
    if (p.zoom_best != 0) {
        std::size_t best = 0;
        check(fpge_scan_best(s.get(), &best));
        s = make<fpge_scan>([&](fpge_scan** o) { return fpge_scan_zoom(s.get(), best, p.zoom_best, o); });
    }
    auto const path = paths.output(p.out);
    write_plot(s.get(), path, p.title, p.log_fitness);
    out << "wrote " << path << "\n";
    return exit_ok;
}

int cmd_search(Cli& cli, Paths const& paths, std::ostream& out)
{
    auto const& p = cli.p;
    fpge_search_config c;
    fpge_search_config_init(&c);
    check(fpge_parse_algorithm(p.algo.c_str(), &c.algorithm));
    c.precision = p.precision;
    c.population = p.pop;
    c.generations = p.generations;
    c.budget = p.evals;
    c.mutation_width = p.mutation_width.c_str();
    c.crossover_probability = p.crossover;
    c.tournament_size = p.tournament;
    c.elitism = p.elitism;
    c.de_weight = p.de_weight;
    c.genome_length = p.genome_length;
    c.codon_mutation_probability = p.codon_mutation;
    c.limits = limits_of(p);
    c.metric = metric_of(p);
    c.seed = p.seed;
    if (p.runs == 0) {
        throw UsageError("--runs must be at least 1");
    }
    if (!(p.holdout >= 0.0 && p.holdout < 1.0)) {
        throw UsageError("--holdout must be in [0, 1)");
    }
    check(fpge_search_config_validate(&c));
    if (p.dry_run) {
        auto const text = make<char>([&](char** o) { return fpge_search_config_describe(&c, o); });
        out << text.get() << "runs = " << p.runs << "\n"
            << "total evaluations = " << p.runs * p.evals << "\n";
        return exit_ok;
    }
    if (p.out.empty()) {
        throw UsageError("--out is required unless --dry-run is given");
    }
    auto const g = load_grammar(paths.input(p.file));
    auto ds = load_data(p, paths);
    Owned<fpge_dataset> test;
    if (p.holdout > 0.0) {
        Owned<fpge_dataset> train;
        fpge_dataset* a = nullptr;
        fpge_dataset* b = nullptr;
        check(fpge_dataset_holdout(ds.get(), p.holdout, &a, &b));
        train.reset(a);
        test.reset(b);
        ds = std::move(train);
    }
    auto const e = make<fpge_experiment>([&](fpge_experiment** o) {
        return fpge_experiment_run(g.get(), ds.get(), test.get(), &c, p.runs, p.threads, o);
    });
    auto const preamble = echo_config(cli, cli.search);
    auto const path = paths.output(p.out);
    check(fpge_experiment_write_csv(e.get(), path.c_str(), p.per_run ? 1 : 0, preamble.c_str()));
    auto const n = fpge_experiment_length(e.get());
    out << "wrote " << path << " (" << fpge_experiment_runs(e.get()) << " runs x " << n << " evaluations, final mean "
        << (n > 0 ? fpge_experiment_mean(e.get())[n - 1] : INFINITY) << ")\n";
    return exit_ok;
}

int run(std::vector<std::string> args, Paths const& paths, std::ostream& out);

int cmd_reproduce(Params const& p, Paths const& paths, std::ostream& out)
{
    auto const protocol = fs::path(paths.input(p.protocol));
    std::ifstream in(protocol);
    if (!in) {
        throw ApiError(FPGE_E_IO, "cannot read protocol '" + protocol.string() + "'");
    }
    Paths inner;
    inner.inputs = protocol.parent_path();
    inner.outputs = p.out_dir.empty() ? inner.inputs : fs::path(paths.output(p.out_dir));
    if (!inner.outputs.empty()) {
        fs::create_directories(inner.outputs);
    }
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string> args;
        std::istringstream words(line);
        for (std::string w; words >> w;) {
            args.push_back(w);
        }
        if (!args.empty() && args.front() == "fpge") {
            args.erase(args.begin());
        }
        if (!args.empty() && args.front() == "reproduce") {
            throw UsageError(protocol.string() + ":" + std::to_string(line_no) + ": protocols cannot nest");
        }
        if (p.threads != 0) {
            args.insert(args.begin(), { "--threads", std::to_string(p.threads) });
        }
        out << "[" << protocol.filename().string() << ":" << line_no << "] " << line << "\n" << std::flush;
        auto const code = run(args, inner, out);
        if (code != exit_ok) {
            std::cerr << "fpge: " << protocol.string() << ":" << line_no << ": command failed\n";
            return code;
        }
    }
    return exit_ok;
}

int dispatch(Cli& cli, Paths const& paths, std::ostream& out)
{
    auto* sub = cli.leaf();
    if (!cli.p.config.empty()) {
        apply_config(cli, sub);
    }
    auto const need = [](std::string const& value, char const* flag) {
        if (value.empty()) {
            throw UsageError(std::string(flag) + " is required");
        }
    };
    auto const& p = cli.p;
    if (sub == cli.decode || sub == cli.scan || sub == cli.search) need(p.file, "--grammar");
    if (sub == cli.dataset_gen) need(p.benchmark, "--benchmark");
    if (sub == cli.plot) need(p.scan, "--scan");
    if (sub == cli.search) need(p.algo, "--algo");
    if (sub == cli.grammar_check) return cmd_grammar_check(cli.p, paths, out);
    if (sub == cli.grammar_factor) return cmd_grammar_factor(cli.p, paths, out);
    if (sub == cli.decode) return cmd_decode(cli.p, paths, out);
    if (sub == cli.dataset_gen) return cmd_dataset_gen(cli, paths, out);
    if (sub == cli.scan) return cmd_scan(cli, paths, out);
    if (sub == cli.plot) return cmd_plot(cli.p, paths, out);
    if (sub == cli.search) return cmd_search(cli, paths, out);
    if (sub == cli.reproduce) return cmd_reproduce(cli.p, paths, out);
    throw UsageError("no command given");
}

int run(std::vector<std::string> args, Paths const& paths, std::ostream& out)
{
    Cli cli;
    try {
        std::reverse(args.begin(), args.end());
        cli.app.parse(args);
        return dispatch(cli, paths, out);
    }
    catch (CLI::CallForHelp const& e) {
        return cli.app.exit(e, out, std::cerr);
    }
    catch (CLI::CallForAllHelp const& e) {
        return cli.app.exit(e, out, std::cerr);
    }
    catch (CLI::CallForVersion const& e) {
        return cli.app.exit(e, out, std::cerr);
    }
    catch (CLI::ParseError const& e) {
        std::cerr << "fpge: " << e.what() << "\n\n" << cli.app.help();
        return exit_usage;
    }
    catch (UsageError const& e) {
        std::cerr << "fpge: " << e.what() << "\n";
        return exit_usage;
    }
    catch (ApiError const& e) {
        std::cerr << "fpge: " << e.what() << "\n";
        switch (e.status) {
        case FPGE_E_INVALID_ARGUMENT: return exit_usage;
        case FPGE_E_INTERNAL: return exit_internal;
        default: return exit_failure;
        }
    }
    catch (fs::filesystem_error const& e) {
        std::cerr << "fpge: " << e.what() << "\n";
        return exit_failure;
    }
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(std::move(args), Paths {}, std::cout);
    }
    catch (std::exception const& e) {
        std::cerr << "fpge: internal error: " << e.what() << "\n";
        return exit_internal;
    }
}
