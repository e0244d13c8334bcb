// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fpge/fpge.h"

namespace {

constexpr char const* kG0 = "<e> ::= <e>+<e> | <e>*<e> | x | y | 1";

std::string temp_path(char const* name)
{
    return (std::filesystem::temp_directory_path() / ("fpge_capi_" + std::string(name))).string();
}

std::string slurp(std::string const& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fpge_grammar* g0()
{
    fpge_grammar* g = nullptr;
    REQUIRE(fpge_grammar_parse(kG0, &g) == FPGE_OK);
    return g;
}

} // namespace

TEST_CASE("grammar handles")
{
    auto* g = g0();
    CHECK(fpge_grammar_rule_count(g) == 1);
    CHECK(fpge_grammar_production_count(g) == 5);
    CHECK(std::string(fpge_grammar_rule_name(g, 0)) == "e");
    CHECK(std::string(fpge_grammar_rule_name(g, 9)).empty());
    CHECK(fpge_grammar_rule_size(g, 0) == 5);
    CHECK(std::string(fpge_grammar_digest(g)).size() == 16);
    uint32_t depth = 0;
    CHECK(fpge_grammar_min_depth(g, "e", &depth) == FPGE_OK);
    CHECK(depth == 2);
    CHECK(fpge_grammar_min_depth(g, "zz", &depth) == FPGE_E_INVALID_ARGUMENT);

    char* text = nullptr;
    REQUIRE(fpge_grammar_serialize(g, &text) == FPGE_OK);
    CHECK(std::string(text) == std::string(kG0) + "\n");
    fpge_string_free(text);

    fpge_grammar* f = nullptr;
    REQUIRE(fpge_grammar_factor(g, "e", "r", &f) == FPGE_OK);
    CHECK(fpge_grammar_rule_count(f) == 2);
    CHECK(fpge_grammar_rule_size(f, 0) == 4);
    fpge_grammar* unused = nullptr;
    CHECK(fpge_grammar_factor(f, "e", "r", &unused) == FPGE_E_GRAMMAR);
    CHECK(unused == nullptr);
    fpge_grammar_free(f);
    fpge_grammar_free(g);
    fpge_grammar_free(nullptr);
}

TEST_CASE("errors carry status and message")
{
    fpge_grammar* g = nullptr;
    CHECK(fpge_grammar_parse("<a> ::= <b>", &g) == FPGE_E_GRAMMAR);
    CHECK(g == nullptr);
    CHECK(std::string(fpge_last_error()).find("b") != std::string::npos);
    CHECK(fpge_grammar_parse(nullptr, &g) == FPGE_E_INVALID_ARGUMENT);
    CHECK(fpge_grammar_load("/nonexistent/grammar.bnf", &g) == FPGE_E_GRAMMAR);
    fpge_order order {};
    CHECK(fpge_parse_order("sideways", &order) == FPGE_E_INVALID_ARGUMENT);
    CHECK(fpge_parse_order("bfs", &order) == FPGE_OK);
    CHECK(order == FPGE_ORDER_BFS);
    fpge_algorithm algo {};
    CHECK(fpge_parse_algorithm("de-bfs", &algo) == FPGE_OK);
    CHECK(algo == FPGE_ALGO_DE_BFS);
    CHECK(std::string(fpge_algorithm_name(FPGE_ALGO_INT_GE)) == "int-ge");
    CHECK(fpge_parse_algorithm("hill-climb", &algo) == FPGE_E_INVALID_ARGUMENT);
    fpge_metric metric {};
    CHECK(fpge_parse_metric("mae", &metric) == FPGE_OK);
    CHECK(metric == FPGE_METRIC_MAE);
    CHECK(std::string(fpge_version()) == "0.1.0");
}

TEST_CASE("decoding")
{
    auto* g = g0();
    auto const limits = fpge_decode_limits_default();
    CHECK(limits.max_depth == 15);
    CHECK(limits.max_nodes == 2000);

    fpge_decoding* d = nullptr;
    REQUIRE(fpge_decode(g, "0.06208", 150, FPGE_ORDER_DFS, limits, &d) == FPGE_OK);
    CHECK(fpge_decoding_valid(d) == 1);
    CHECK(std::string(fpge_decoding_phenotype(d)) == "x*y+1");
    CHECK(fpge_decoding_node_count(d) == 10);
    REQUIRE(fpge_decoding_choice_count(d) == 5);
    CHECK(std::vector<uint32_t>(fpge_decoding_choices(d), fpge_decoding_choices(d) + 5)
        == std::vector<uint32_t> { 0, 1, 2, 3, 4 });
    CHECK(std::string(fpge_decoding_residual(d)) == "0." + std::string(150, '0'));
    fpge_decoding_free(d);

    REQUIRE(fpge_decode(g, "0.06208", 150, FPGE_ORDER_BFS, limits, &d) == FPGE_OK);
    CHECK(std::string(fpge_decoding_phenotype(d)) == "y*1+x");
    fpge_decoding_free(d);

    REQUIRE(fpge_decode(g, "0", 150, FPGE_ORDER_DFS, limits, &d) == FPGE_OK);
    CHECK(fpge_decoding_valid(d) == 0);
    CHECK(std::string(fpge_decoding_invalid_reason(d)) == "depth");
    CHECK(std::string(fpge_decoding_phenotype(d)).empty());
    fpge_decoding_free(d);

    CHECK(fpge_decode(g, "0.5.", 150, FPGE_ORDER_DFS, limits, &d) == FPGE_E_DATA);
    CHECK(fpge_decode(g, "0.5", 150, FPGE_ORDER_DFS, { 1, 10 }, &d) == FPGE_E_INVALID_ARGUMENT);

    uint32_t const codons[] = { 5, 2, 3 };
    REQUIRE(fpge_decode_codons(g, codons, 3, limits, &d) == FPGE_OK);
    CHECK(std::string(fpge_decoding_phenotype(d)) == "x+y");
    fpge_decoding_free(d);
    REQUIRE(fpge_decode_codons(g, codons + 2, 0, limits, &d) == FPGE_OK);
    CHECK(std::string(fpge_decoding_invalid_reason(d)) == "codons");
    fpge_decoding_free(d);
    fpge_grammar_free(g);
}

TEST_CASE("datasets and fitness")
{
    fpge_dataset* ds = nullptr;
    REQUIRE(fpge_dataset_generate("vlad4", 30, 5, &ds) == FPGE_OK);
    CHECK(fpge_dataset_rows(ds) == 30);
    CHECK(fpge_dataset_variables(ds) == 5);
    CHECK(std::string(fpge_dataset_id(ds)) == "vlad4:n=30:seed=5");
    double f = 0;
    REQUIRE(fpge_fitness("10/(5+(x0-3)*(x0-3)+(x1-3)*(x1-3)+(x2-3)*(x2-3)+(x3-3)*(x3-3)+(x4-3)*(x4-3))", ds,
                FPGE_METRIC_RMSE, &f)
        == FPGE_OK);
    CHECK(f < 1e-9);
    REQUIRE(fpge_fitness("nonsense(", ds, FPGE_METRIC_RMSE, &f) == FPGE_OK);
    CHECK(std::isinf(f));

    auto const path = temp_path("data.csv");
    REQUIRE(fpge_dataset_write_csv(ds, path.c_str(), "# hello\n") == FPGE_OK);
    CHECK(slurp(path).starts_with("# hello\nx0,x1,x2,x3,x4,y\n"));
    fpge_dataset* back = nullptr;
    REQUIRE(fpge_dataset_load_csv(path.c_str(), &back) == FPGE_OK);
    CHECK(fpge_dataset_rows(back) == 30);

    fpge_dataset* train = nullptr;
    fpge_dataset* test = nullptr;
    REQUIRE(fpge_dataset_holdout(back, 0.2, &train, &test) == FPGE_OK);
    CHECK(fpge_dataset_rows(train) == 24);
    CHECK(fpge_dataset_rows(test) == 6);
    fpge_dataset_free(train);
    fpge_dataset_free(test);
    fpge_dataset_free(back);
    fpge_dataset_free(ds);
    std::filesystem::remove(path);

    CHECK(fpge_dataset_generate("housing", 30, 5, &ds) == FPGE_E_INVALID_ARGUMENT);
    CHECK(fpge_dataset_load_csv("/nonexistent.csv", &ds) != FPGE_OK);
    CHECK(fpge_dataset_write_csv(nullptr, "x", nullptr) == FPGE_E_INVALID_ARGUMENT);
}

TEST_CASE("scans")
{
    auto* g = g0();
    fpge_dataset* ds = nullptr;
    REQUIRE(fpge_dataset_generate("paige1", 20, 1, &ds) == FPGE_OK);
    fpge_scan_config cfg;
    fpge_scan_config_init(&cfg);
    CHECK(cfg.samples == 25000);
    CHECK(cfg.precision == 150);
    cfg.samples = 500;
    cfg.seed = 9;
    cfg.threads = 2;
    fpge_scan* s = nullptr;
    REQUIRE(fpge_scan_run(g, ds, &cfg, &s) == FPGE_OK);
    REQUIRE(fpge_scan_size(s) == 500);
    fpge_scan_record r {};
    REQUIRE(fpge_scan_record_at(s, 0, &r) == FPGE_OK);
    CHECK(std::string(r.val).size() == 152);
    CHECK(fpge_scan_record_at(s, 500, &r) == FPGE_E_INVALID_ARGUMENT);
    size_t best = 0;
    REQUIRE(fpge_scan_best(s, &best) == FPGE_OK);

    fpge_scan* w = nullptr;
    REQUIRE(fpge_scan_zoom(s, best, 50, &w) == FPGE_OK);
    CHECK(fpge_scan_size(w) == 50);
    fpge_scan* fine = nullptr;
    REQUIRE(fpge_scan_rescan(w, g, ds, &cfg, 80, &fine) == FPGE_OK);
    CHECK(fpge_scan_size(fine) == 80);

    auto const csv = temp_path("scan.csv");
    auto const svg = temp_path("scan.svg");
    REQUIRE(fpge_scan_write_csv(s, csv.c_str(), nullptr) == FPGE_OK);
    fpge_svg_options opt;
    fpge_svg_options_init(&opt);
    CHECK(opt.width == 960);
    REQUIRE(fpge_scan_write_svg(s, svg.c_str(), &opt) == FPGE_OK);
    CHECK(slurp(svg).starts_with("<svg"));
    fpge_scan* back = nullptr;
    REQUIRE(fpge_scan_load_csv(csv.c_str(), &back) == FPGE_OK);
    CHECK(fpge_scan_size(back) == 500);
    fpge_scan_record a {};
    fpge_scan_record b {};
    for (size_t i = 0; i < 500; i += 37) {
        fpge_scan_record_at(s, i, &a);
        fpge_scan_record_at(back, i, &b);
        CHECK(std::string(a.val) == b.val);
        CHECK(a.fitness == b.fitness);
        CHECK(a.nodes == b.nodes);
        CHECK(std::string(a.invalid_reason) == b.invalid_reason);
    }
    CHECK(fpge_scan_write_csv(s, "/nonexistent/dir/x.csv", nullptr) == FPGE_E_IO);

    for (auto* p : { s, w, fine, back }) {
        fpge_scan_free(p);
    }
    std::filesystem::remove(csv);
    std::filesystem::remove(svg);
    fpge_dataset_free(ds);
    fpge_grammar_free(g);
}

TEST_CASE("experiments")
{
    auto* g = g0();
    fpge_dataset* ds = nullptr;
    REQUIRE(fpge_dataset_generate("paige1", 20, 1, &ds) == FPGE_OK);
    fpge_search_config cfg;
    fpge_search_config_init(&cfg);
    CHECK(cfg.population == 500);
    CHECK(cfg.budget == 25000);
    CHECK(std::string(cfg.mutation_width) == "0.05");
    cfg.algorithm = FPGE_ALGO_DE_DFS;
    cfg.population = 10;
    cfg.budget = 120;
    cfg.precision = 40;
    cfg.seed = 3;
    REQUIRE(fpge_search_config_validate(&cfg) == FPGE_OK);
    char* text = nullptr;
    REQUIRE(fpge_search_config_describe(&cfg, &text) == FPGE_OK);
    CHECK(std::string(text).find("algo = de-dfs") != std::string::npos);
    fpge_string_free(text);

    fpge_experiment* e = nullptr;
    REQUIRE(fpge_experiment_run(g, ds, nullptr, &cfg, 3, 0, &e) == FPGE_OK);
    CHECK(fpge_experiment_runs(e) == 3);
    REQUIRE(fpge_experiment_length(e) == 120);
    auto const* mean = fpge_experiment_mean(e);
    for (size_t i = 1; i < 120; ++i) {
        CHECK(mean[i] <= mean[i - 1]);
    }
    CHECK(fpge_experiment_run_trace(e, 3) == nullptr);
    CHECK(std::isnan(fpge_experiment_test_fitness(e, 0)));
    CHECK(std::string(fpge_experiment_best_genotype(e, 0)).size() == 42);

    auto const path = temp_path("trace.csv");
    REQUIRE(fpge_experiment_write_csv(e, path.c_str(), 0, "#@ x = 1\n") == FPGE_OK);
    auto const agg = slurp(path);
    CHECK(agg.starts_with("#@ x = 1\n"));
    CHECK(agg.find("eval,mean_best,std_best\n1,") != std::string::npos);
    REQUIRE(fpge_experiment_write_csv(e, path.c_str(), 1, nullptr) == FPGE_OK);
    auto const per = slurp(path);
    CHECK(per.find("eval,run,best\n1,0,") != std::string::npos);
    CHECK(per.find("\n120,2,") != std::string::npos);
    fpge_experiment_free(e);
    std::filesystem::remove(path);

    cfg.population = 3;
    CHECK(fpge_search_config_validate(&cfg) == FPGE_E_INVALID_ARGUMENT);
    CHECK(fpge_experiment_run(g, ds, nullptr, &cfg, 3, 1, &e) == FPGE_E_INVALID_ARGUMENT);
    cfg.population = 10;
    CHECK(fpge_experiment_run(g, ds, nullptr, &cfg, 0, 1, &e) == FPGE_E_INVALID_ARGUMENT);

    fpge_dataset* train = nullptr;
    fpge_dataset* test = nullptr;
    REQUIRE(fpge_dataset_holdout(ds, 0.25, &train, &test) == FPGE_OK);
    REQUIRE(fpge_experiment_run(g, train, test, &cfg, 2, 1, &e) == FPGE_OK);
    double expected = 0;
    fpge_fitness(fpge_experiment_best_phenotype(e, 1), test, FPGE_METRIC_RMSE, &expected);
    CHECK(fpge_experiment_test_fitness(e, 1) == expected);
    fpge_experiment_free(e);
    fpge_dataset_free(train);
    fpge_dataset_free(test);
    fpge_dataset_free(ds);
    fpge_grammar_free(g);
}
