// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. argv[1] is the fpge executable.

#include <gmpxx.h>
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fpge/decoder/decoder.hpp"
#include "fpge/evaluator/dataset.hpp"
#include "fpge/evaluator/fitness.hpp"
#include "fpge/grammar/grammar.hpp"
#include "fpge/landscape/scan.hpp"
#include "fpge/precision/rng.hpp"
#include "fpge/search/operators.hpp"
#include "fpge/search/search.hpp"
#include "support/rational_oracle.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_cli;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool condition, std::string const& what)
    {
        if (!condition && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string grammar_path(char const* name) { return std::string(FPGE_SOURCE_DIR) + "/grammars/" + name; }

fpge::Grammar const& g0()
{
    static auto const g = fpge::load_bnf(grammar_path("g0.bnf"));
    return g;
}

int run(std::string const& args, std::string* output = nullptr)
{
    auto const cmd = "\"" + g_cli + "\" " + args + " 2>&1";
    auto* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return -1;
    }
    std::string out;
    std::array<char, 4096> buf {};
    while (auto n = std::fread(buf.data(), 1, buf.size(), pipe)) {
        out.append(buf.data(), n);
    }
    auto const status = pclose(pipe);
    if (output != nullptr) {
        *output = out;
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(fs::path const& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path workdir(char const* name)
{
    auto const dir = fs::current_path() / "acceptance_work" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> split_fields(std::string const& line)
{
    std::vector<std::string> fields;
    std::stringstream s(line);
    std::string field;
    while (std::getline(s, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

// Data rows after the header line starting with `header`.
std::vector<std::vector<std::string>> csv_rows(std::string const& text, std::string const& header)
{
    std::vector<std::vector<std::string>> rows;
    std::stringstream s(text);
    std::string line;
    bool body = false;
    while (std::getline(s, line)) {
        if (body) {
            rows.push_back(split_fields(line));
        }
        else if (line == header) {
            body = true;
        }
    }
    return rows;
}

std::string join(std::vector<std::uint32_t> const& xs)
{
    std::string s;
    for (auto x : xs) {
        s += (s.empty() ? "" : " ") + std::to_string(x);
    }
    return s;
}

Outcome hand_traces()
{
    Outcome o;
    fpge::DecodeLimits const limits { 15, 2000 };
    auto const v = fpge::UnitFraction::parse("0.06208");

    // Split sequence (index, residual) by hand multiplication.
    std::vector<std::pair<std::uint32_t, std::string>> const expected {
        { 0, "0.3104" }, { 1, "0.552" }, { 2, "0.76" }, { 3, "0.8" }, { 4, "0" }
    };
    auto r = v;
    for (auto const& [index, residual] : expected) {
        auto const s = fpge::split(r, 5);
        o.require(s.index == index && s.residual.to_string() == residual,
            "split of " + r.to_string() + " gave (" + std::to_string(s.index) + "," + s.residual.to_string() + ")");
        r = s.residual;
    }

    auto const dfs = fpge::dfs_decode(v, g0(), limits);
    o.require(dfs.valid() && fpge::render(dfs.as_valid().tree) == "x*y+1", "dfs phenotype");
    o.require(dfs.valid() && fpge::node_count(dfs.as_valid().tree) == 10, "dfs node count");
    o.require(join(dfs.choices) == "0 1 2 3 4", "dfs choices " + join(dfs.choices));
    auto const bfs = fpge::bfs_decode(v, g0(), limits);
    o.require(bfs.valid() && fpge::render(bfs.as_valid().tree) == "y*1+x", "bfs phenotype");
    o.require(join(bfs.choices) == "0 1 2 3 4", "bfs choices " + join(bfs.choices));

    for (auto order : { fpge::DecodeOrder::dfs, fpge::DecodeOrder::bfs }) {
        auto const zero = fpge::decode(fpge::UnitFraction::zero(), g0(), order, limits);
        o.require(!zero.valid(), "val 0 decoded");
        auto const one = fpge::decode(fpge::UnitFraction::one(), g0(), order, limits);
        o.require(one.valid() && fpge::render(one.as_valid().tree) == "1", "val 1 phenotype");
    }
    o.detail = o.pass ? "x*y+1 / y*1+x, splits (0,.3104)(1,.552)(2,.76)(3,.8)(4,0)" : o.detail;
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    std::vector<fpge::Grammar> const grammars { g0(), fpge::load_bnf(grammar_path("keijzer6.bnf")),
        fpge::load_bnf(grammar_path("vlad4_factored.bnf")) };
    fpge::DecodeLimits const limits { 15, 2000 };
    fpge::Rng rng(2026);
    std::size_t agreed = 0;
    std::size_t total = 0;
    for (auto const& g : grammars) {
        oracle::Decoder reference(g, limits.max_depth, limits.max_nodes);
        for (int i = 0; i < 1000; ++i) {
            auto const v = fpge::random_unit(rng, 150);
            auto const q = oracle::from_decimal(v.to_string(false));
            for (auto order : { fpge::DecodeOrder::dfs, fpge::DecodeOrder::bfs }) {
                auto const got = fpge::decode(v, g, order, limits);
                auto const want = order == fpge::DecodeOrder::dfs ? reference.dfs(q) : reference.bfs(q);
                bool const same = got.choices == want.choices && got.valid() == !want.invalid.has_value();
                agreed += same ? 1 : 0;
                ++total;
                o.require(same, "disagreement at " + v.to_string() + " (" + std::string(fpge::to_string(order)) + ")");
            }
        }
    }
    if (o.pass) {
        o.detail = std::to_string(agreed) + "/" + std::to_string(total) + " decodes agree";
    }
    return o;
}

Outcome determinism()
{
    Outcome o;
    auto const dir = workdir("determinism");
    auto const scan = "scan --grammar " + grammar_path("keijzer6.bnf") + " --benchmark keijzer6 --samples 2000 --seed 7 --out ";
    o.require(run(scan + (dir / "a.csv").string()) == 0, "scan a failed");
    o.require(run(scan + (dir / "b.csv").string() + " --threads 1") == 0, "scan b failed");
    o.require(slurp(dir / "a.csv") == slurp(dir / "b.csv"), "scan outputs differ");
    for (auto const* algo : { "fpge-dfs", "de-bfs", "rand-dfs", "int-ge" }) {
        auto const search = std::string("search --algo ") + algo + " --grammar " + grammar_path("vlad4.bnf")
            + " --benchmark vlad4 --runs 3 --evals 500 --pop 50 --seed 3 --per-run --out ";
        o.require(run(search + (dir / "s1.csv").string()) == 0, std::string(algo) + " search failed");
        o.require(run(search + (dir / "s2.csv").string() + " --threads 1") == 0, std::string(algo) + " search failed");
        o.require(slurp(dir / "s1.csv") == slurp(dir / "s2.csv"), std::string(algo) + " traces differ");
    }
    if (o.pass) {
        o.detail = "scan and 4 search traces byte-identical";
    }
    return o;
}

struct ScanSummary {
    double mean_nodes = 0;
    double invalid_fraction = 0;
    double left_mean = 0;
    double right_mean = 0;
};

ScanSummary summarize(fpge::Grammar const& g, fpge::Dataset const& data)
{
    fpge::ScanSettings s;
    s.samples = 5000;
    s.seed = 11;
    s.threads = 0;
    auto const scan = fpge::scan(g, data, s);
    ScanSummary out;
    std::size_t valid = 0;
    std::size_t left = 0;
    std::size_t right = 0;
    for (auto const& r : scan.records) {
        if (!r.valid) {
            continue;
        }
        ++valid;
        out.mean_nodes += static_cast<double>(r.nodes);
        auto const x = r.val.to_double();
        if (x <= 0.1) {
            out.left_mean += static_cast<double>(r.nodes);
            ++left;
        }
        if (x >= 0.9) {
            out.right_mean += static_cast<double>(r.nodes);
            ++right;
        }
    }
    out.mean_nodes /= static_cast<double>(valid);
    out.left_mean /= static_cast<double>(left);
    out.right_mean /= static_cast<double>(right);
    out.invalid_fraction = 1.0 - static_cast<double>(valid) / static_cast<double>(scan.records.size());
    return out;
}

fpge::Dataset const& keijzer6_data()
{
    static auto const d = [] {
        fpge::Rng rng(1);
        return fpge::generate_dataset(fpge::Benchmark::keijzer6, 200, rng);
    }();
    return d;
}

Outcome left_heavy()
{
    Outcome o;
    auto const s = summarize(fpge::load_bnf(grammar_path("keijzer6.bnf")), keijzer6_data());
    o.require(s.left_mean > s.right_mean, "left mean not above right mean");
    o.detail = "mean nodes [0,0.1] = " + fpge::format_double(s.left_mean) + ", [0.9,1] = "
        + fpge::format_double(s.right_mean);
    return o;
}

Outcome factoring()
{
    Outcome o;
    auto const g = fpge::load_bnf(grammar_path("keijzer6.bnf"));
    auto const before = summarize(g, keijzer6_data());
    auto const after = summarize(fpge::factor_rule(g, "e", "r"), keijzer6_data());
    o.require(after.mean_nodes < before.mean_nodes, "mean nodes did not drop");
    o.require(after.invalid_fraction <= before.invalid_fraction, "invalid fraction rose");
    o.detail = "mean nodes " + fpge::format_double(before.mean_nodes) + " -> " + fpge::format_double(after.mean_nodes)
        + ", invalid " + fpge::format_double(before.invalid_fraction) + " -> "
        + fpge::format_double(after.invalid_fraction);
    return o;
}

mpq_class as_q(fpge::UnitFraction const& v) { return oracle::from_decimal(v.to_string(false)); }

Outcome operator_laws()
{
    Outcome o;
    fpge::Rng rng(99);
    auto const half = fpge::UnitFraction::parse("0.05");
    mpq_class const h = as_q(half);
    std::size_t violations = 0;
    for (int i = 0; i < 10'000; ++i) {
        auto const v = fpge::random_unit(rng);
        auto const m = fpge::mutate(v, half, rng);
        mpq_class d = as_q(m) - as_q(v);
        if (d < 0) {
            d = -d;
        }
        if (d > mpq_class(1, 2)) {
            d = 1 - d;
        }
        violations += (m <= fpge::UnitFraction::one() && d <= h) ? 0 : 1;

        auto const a = fpge::random_unit(rng);
        auto const c = fpge::crossover(v, a, rng);
        violations += (std::min(v, a) <= c && c <= std::max(v, a)) ? 0 : 1;

        auto const b = fpge::random_unit(rng);
        auto const t = fpge::de_trial(v, a, b, fpge::DeWeight::from_double(0.5 + 1.5 * (i % 2)));
        violations += (!(t > fpge::UnitFraction::one())) ? 0 : 1;
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    if (o.pass) {
        o.detail = "3 x 10000 samples, 0 violations";
    }
    return o;
}

Outcome protocol_shape()
{
    Outcome o;
    auto const dir = workdir("protocol");
    std::string timings;
    for (auto const* bench : { "keijzer6", "vlad4" }) {
        auto const start = std::chrono::steady_clock::now();
        for (auto a : fpge::kAllAlgorithms) {
            auto const algo = std::string(fpge::to_string(a));
            bool const de = a == fpge::Algorithm::de_dfs || a == fpge::Algorithm::de_bfs;
            auto const base = "search --algo " + algo + " --grammar " + grammar_path((std::string(bench) + ".bnf").c_str())
                + " --benchmark " + bench + " --runs 5 --evals 2000 --pop " + (de ? "50" : "100") + " --seed 1 ";
            auto const tag = std::string(bench) + "-" + algo;
            auto const per_run = dir / (tag + ".runs.csv");
            auto const agg = dir / (tag + ".csv");
            o.require(run(base + "--per-run --out " + per_run.string()) == 0, tag + " per-run search failed");
            o.require(run(base + "--out " + agg.string()) == 0, tag + " search failed");

            std::vector<std::vector<double>> traces(5);
            for (auto const& row : csv_rows(slurp(per_run), "eval,run,best")) {
                auto const r = std::stoul(row.at(1));
                o.require(r < 5 && std::stoul(row.at(0)) == traces.at(r).size() + 1, tag + " eval column out of order");
                traces.at(r).push_back(std::stod(row.at(2)));
            }
            for (auto const& t : traces) {
                o.require(t.size() == 2000, tag + " trace length " + std::to_string(t.size()));
                for (std::size_t i = 1; i < t.size(); ++i) {
                    o.require(t[i] <= t[i - 1], tag + " trace increases");
                }
            }
            auto const rows = csv_rows(slurp(agg), "eval,mean_best,std_best");
            o.require(rows.size() == 2000, tag + " aggregated length " + std::to_string(rows.size()));
            for (auto const& row : rows) {
                o.require(row.size() == 3, tag + " aggregated row shape");
            }
        }
        auto const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(seconds < 300, std::string(bench) + " took " + std::to_string(seconds) + " s");
        timings += std::string(timings.empty() ? "" : ", ") + bench + " " + fpge::format_double(std::round(seconds * 10) / 10) + " s";
    }
    std::string dry;
    o.require(run("search --algo fpge-dfs --grammar " + grammar_path("keijzer6.bnf")
                      + " --benchmark keijzer6 --runs 30 --evals 25000 --pop 500 --dry-run",
                  &dry)
            == 0,
        "full-scale dry run rejected");
    o.require(dry.find("total evaluations = 750000") != std::string::npos, "full-scale dry run summary");
    o.detail = "7 algorithms x 5 x 2000 (" + timings + "), full scale accepted";
    return o;
}

Outcome perfect_fit()
{
    Outcome o;
    fpge::Dataset ones;
    ones.variable_names = { "x", "y" };
    for (int i = 0; i < 50; ++i) {
        ones.values.push_back(0.1 * i);
        ones.values.push_back(3.0 - 0.1 * i);
        ones.targets.push_back(1.0);
    }
    auto const one = fpge::dfs_decode(fpge::UnitFraction::one(), g0(), {});
    o.require(one.valid(), "val 1 invalid");
    auto const phenotype = fpge::render(one.as_valid().tree);
    auto const f = fpge::fitness(phenotype, ones).value;
    o.require(phenotype == "1" && f < 1e-9, "constant target fitness " + fpge::format_double(f));

    double worst = f;
    for (auto b : { fpge::Benchmark::keijzer6, fpge::Benchmark::paige1, fpge::Benchmark::vlad4 }) {
        fpge::Rng rng(4);
        auto const data = fpge::generate_dataset(b, 200, rng);
        // Generating expression as the leading production.
        auto const g = fpge::parse_bnf("<e> ::= " + std::string(fpge::generating_expression(b)) + " | 1");
        auto const decoded = fpge::dfs_decode(fpge::UnitFraction::zero(), g, {});
        o.require(decoded.valid(), std::string(fpge::to_string(b)) + " decode invalid");
        auto const fit = fpge::fitness(fpge::render(decoded.as_valid().tree), data).value;
        o.require(fit < 1e-9, std::string(fpge::to_string(b)) + " fitness " + fpge::format_double(fit));
        worst = std::max(worst, fit);
    }
    o.detail = "worst fitness " + fpge::format_double(worst);
    return o;
}

Outcome codon_mapping()
{
    Outcome o;
    std::vector<std::uint32_t> const seven { 7, 1, 4, 0, 2 };
    std::vector<std::uint32_t> const five { 5, 2, 3 };
    std::vector<std::uint32_t> const zero { 0 };
    auto const a = fpge::codon_decode(seven, g0(), {});
    o.require(a.valid() && fpge::render(a.as_valid().tree) == "x" && a.choices.size() == 1, "[7,...]");
    auto const b = fpge::codon_decode(five, g0(), {});
    o.require(b.valid() && fpge::render(b.as_valid().tree) == "x+y", "[5,2,3]");
    auto const c = fpge::codon_decode(zero, g0(), {});
    o.require(!c.valid(), "[0] decoded");
    std::string out;
    o.require(run("decode --grammar " + grammar_path("g0.bnf") + " --codons 5,2,3", &out) == 0
            && out.starts_with("x+y\n"),
        "cli codon decode");
    if (o.pass) {
        o.detail = "[7,..] -> x, [5,2,3] -> x+y, [0] -> invalid";
    }
    return o;
}

fpge::Scan synthetic(std::size_t n, std::size_t best_at)
{
    fpge::Scan s;
    s.meta.precision = 6;
    for (std::size_t i = 0; i < n; ++i) {
        fpge::ScanRecord r { fpge::UnitFraction(fpge::Natural(1000 + i), 6), fpge::Fitness { i == best_at ? 0.5 : 2.0 + static_cast<double>(i % 7) },
            3, true, std::nullopt };
        s.records.push_back(r);
    }
    return s;
}

Outcome zoom_window()
{
    Outcome o;
    std::vector<std::pair<std::size_t, std::size_t>> cases;
    for (std::size_t n : { 250U, 251U, 500U, 5000U }) {
        for (std::size_t b : { std::size_t { 0 }, std::size_t { 1 }, std::size_t { 124 }, std::size_t { 125 },
                 std::size_t { 126 }, n / 2, n - 126, n - 125, n - 2, n - 1 }) {
            if (b < n) {
                cases.emplace_back(n, b);
            }
        }
    }
    for (auto const& [n, b] : cases) {
        auto const s = synthetic(n, b);
        auto const [best_index, best_record] = fpge::best(s);
        auto const tag = "n=" + std::to_string(n) + " best=" + std::to_string(b);
        o.require(best_index == b, tag + " best index");
        auto const w = fpge::zoom(s, best_index, 250);
        o.require(w.records.size() == 250, tag + " size " + std::to_string(w.records.size()));
        // Contiguous slice of the scan.
        std::size_t start = 0;
        while (start < n && !(s.records[start].val == w.records.front().val)) {
            ++start;
        }
        o.require(start + 250 <= n, tag + " window outside scan");
        bool contiguous = start + 250 <= n;
        for (std::size_t i = 0; contiguous && i < 250; ++i) {
            contiguous = s.records[start + i].val == w.records[i].val;
        }
        o.require(contiguous, tag + " not contiguous");
        o.require(start <= b && b < start + 250, tag + " best outside window");
        std::size_t const expected = std::min(b >= 125 ? b - 125 : 0, n - 250);
        o.require(start == expected, tag + " start " + std::to_string(start));
    }
    // A real scan through the CLI.
    auto const dir = workdir("zoom");
    o.require(run("scan --grammar " + grammar_path("paige1.bnf") + " --benchmark paige1 --samples 250 --zoom-best 250 --out "
                  + (dir / "s.csv").string())
            == 0,
        "cli scan with zoom failed");
    auto const full = csv_rows(slurp(dir / "s.csv"), "val,fitness,nodes,valid,invalid_reason");
    auto const zoomed = csv_rows(slurp(dir / "s.csv.zoom.csv"), "val,fitness,nodes,valid,invalid_reason");
    o.require(full == zoomed && zoomed.size() == 250, "n=250 zoom differs from the scan");
    if (o.pass) {
        o.detail = std::to_string(cases.size()) + " window cases plus a 250-sample scan";
    }
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    g_cli = argc > 1 ? argv[1] : FPGE_CLI_PATH;
    std::vector<std::pair<char const*, std::function<Outcome()>>> const criteria {
        { "hand-trace fidelity", hand_traces },
        { "oracle equivalence", oracle_equivalence },
        { "determinism", determinism },
        { "left-heavy complexity", left_heavy },
        { "factoring effect", factoring },
        { "operator laws", operator_laws },
        { "protocol shape", protocol_shape },
        { "perfect fit", perfect_fit },
        { "int-ge mapping", codon_mapping },
        { "landscape zoom", zoom_window },
    };
    int failures = 0;
    int index = 0;
    for (auto const& [name, check] : criteria) {
        ++index;
        auto const start = std::chrono::steady_clock::now();
        Outcome result;
        try {
            result = check();
        }
        catch (std::exception const& e) {
            result = { false, std::string("exception: ") + e.what() };
        }
        auto const ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        std::cout << (result.pass ? "PASS" : "FAIL") << " " << index << " " << name << " (" << ms.count()
                  << " ms): " << result.detail << std::endl;
        failures += result.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
