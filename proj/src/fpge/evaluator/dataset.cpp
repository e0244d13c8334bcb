// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/evaluator/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fpge/error.hpp"
#include "fpge/precision/rng.hpp"

namespace fpge {

namespace {

[[noreturn]] void data_error(std::string const& what) { throw Error(ErrorKind::data, what); }

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        auto const comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            return cells;
        }
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

void Dataset::validate() const
{
    if (variable_names.empty()) {
        data_error("dataset has no input variables");
    }
    if (targets.empty()) {
        data_error("dataset has no rows");
    }
    if (values.size() != targets.size() * variable_names.size()) {
        data_error("dataset rows do not match the variable count");
    }
    for (auto t : targets) {
        if (!std::isfinite(t)) {
            data_error("dataset has a non-finite target");
        }
    }
}

std::string_view to_string(Benchmark benchmark) noexcept
{
    switch (benchmark) {
    case Benchmark::keijzer6: return "keijzer6";
    case Benchmark::paige1: return "paige1";
    case Benchmark::vlad4: return "vlad4";
    }
    return "unknown";
}

Benchmark parse_benchmark(std::string_view name)
{
    for (auto b : { Benchmark::keijzer6, Benchmark::paige1, Benchmark::vlad4 }) {
        if (to_string(b) == name) {
            return b;
        }
    }
    throw Error(ErrorKind::usage, "unknown benchmark '" + std::string(name) + "' (expected keijzer6, paige1 or vlad4)");
}

SamplingRange default_range(Benchmark benchmark) noexcept
{
    switch (benchmark) {
    case Benchmark::keijzer6: return { -1.0, 1.0 };
    case Benchmark::paige1: return { -5.0, 5.0 };
    case Benchmark::vlad4: return { 0.05, 6.05 };
    }
    return { 0.0, 1.0 };
}

std::size_t benchmark_arity(Benchmark benchmark) noexcept
{
    switch (benchmark) {
    case Benchmark::keijzer6: return 3;
    case Benchmark::paige1: return 2;
    case Benchmark::vlad4: return 5;
    }
    return 0;
}

double benchmark_target(Benchmark benchmark, std::span<double const> x) noexcept
{
    switch (benchmark) {
    case Benchmark::keijzer6:
        return 30 * x[0] * x[2] / ((x[0] - 10) * x[1] * x[1]);
    case Benchmark::paige1:
        return 1 / (1 + std::pow(x[0], -4.0)) + 1 / (1 + std::pow(x[1], -4.0));
    case Benchmark::vlad4: {
        double sum = 5;
        for (std::size_t i = 0; i < 5; ++i) {
            sum += (x[i] - 3) * (x[i] - 3);
        }
        return 10 / sum;
    }
    }
    return 0.0;
}

std::string_view generating_expression(Benchmark benchmark) noexcept
{
    switch (benchmark) {
    case Benchmark::keijzer6:
        return "30*x0*x2/((x0-10)*x1*x1)";
    case Benchmark::paige1:
        return "1/(1+1/(x0*x0*x0*x0))+1/(1+1/(x1*x1*x1*x1))";
    case Benchmark::vlad4:
        return "10/(5+(x0-3)*(x0-3)+(x1-3)*(x1-3)+(x2-3)*(x2-3)+(x3-3)*(x3-3)+(x4-3)*(x4-3))";
    }
    return "";
}

Dataset generate_dataset(Benchmark benchmark, std::size_t n, Rng& rng, std::optional<SamplingRange> range)
{
    if (n == 0) {
        throw Error(ErrorKind::usage, "dataset size must be at least 1");
    }
    auto const box = range.value_or(default_range(benchmark));
    if (!(box.lo < box.hi)) {
        throw Error(ErrorKind::usage, "sampling range must satisfy lo < hi");
    }
    auto const arity = benchmark_arity(benchmark);
    auto excluded = [benchmark](std::span<double const> x) {
        switch (benchmark) {
        case Benchmark::keijzer6:
            return std::fabs(x[0] - 10) < 0.5 || std::fabs(x[1]) < 0.05;
        case Benchmark::paige1:
            return std::fabs(x[0]) < 0.01 || std::fabs(x[1]) < 0.01;
        case Benchmark::vlad4:
            return false;
        }
        return false;
    };

    Dataset ds;
    for (std::size_t i = 0; i < arity; ++i) {
        ds.variable_names.push_back("x" + std::to_string(i));
    }
    ds.values.reserve(n * arity);
    ds.targets.reserve(n);
    std::vector<double> x(arity);
    constexpr int kMaxAttempts = 1'000'000;
    for (std::size_t r = 0; r < n; ++r) {
        int attempts = 0;
        do {
            if (++attempts > kMaxAttempts) {
                throw Error(ErrorKind::usage, "sampling range leaves no admissible inputs");
            }
            for (auto& xi : x) {
                xi = rng.uniform(box.lo, box.hi);
            }
        } while (excluded(x));
        ds.values.insert(ds.values.end(), x.begin(), x.end());
        ds.targets.push_back(benchmark_target(benchmark, x));
    }
    ds.id = std::string(to_string(benchmark)) + ":n=" + std::to_string(n);
    ds.validate();
    return ds;
}

Dataset parse_csv(std::string_view text, std::string id)
{
    Dataset ds;
    ds.id = std::move(id);
    bool header = false;
    std::size_t width = 0;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto const eol = text.find('\n');
        auto const line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view {} : text.substr(eol + 1);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto const cells = split_commas(line);
        if (!header) {
            if (cells.size() < 2) {
                data_error("line " + std::to_string(line_no) + ": header needs at least one variable and a target");
            }
            for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
                ds.variable_names.emplace_back(trim(cells[i]));
            }
            ds.target_name = std::string(trim(cells.back()));
            width = cells.size();
            header = true;
            continue;
        }
        if (cells.size() != width) {
            data_error("line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " cells, found "
                + std::to_string(cells.size()));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            auto const cell = trim(cells[i]);
            double v = 0.0;
            auto const res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || res.ec != std::errc {} || res.ptr != cell.data() + cell.size()) {
                data_error("line " + std::to_string(line_no) + ": non-numeric cell '" + std::string(cell) + "'");
            }
            if (i + 1 < cells.size()) {
                ds.values.push_back(v);
            }
            else {
                if (!std::isfinite(v)) {
                    data_error("line " + std::to_string(line_no) + ": non-finite target");
                }
                ds.targets.push_back(v);
            }
        }
    }
    if (!header) {
        data_error("empty CSV file");
    }
    ds.validate();
    return ds;
}

Dataset load_csv(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        data_error("cannot open dataset '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_csv(buffer.str(), path.filename().string());
    }
    catch (Error const& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string format_csv(Dataset const& dataset, std::string_view preamble)
{
    std::string out(preamble);
    for (auto const& name : dataset.variable_names) {
        out += name;
        out += ',';
    }
    out += dataset.target_name;
    out += '\n';
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
        for (auto v : dataset.row(r)) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(dataset.targets[r]);
        out += '\n';
    }
    return out;
}

void write_csv(Dataset const& dataset, std::filesystem::path const& path, std::string_view preamble)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    }
    out << format_csv(dataset, preamble);
    if (!out) {
        throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
    }
}

std::pair<Dataset, Dataset> holdout_split(Dataset const& dataset, double fraction)
{
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw Error(ErrorKind::usage, "holdout fraction must be in (0, 1)");
    }
    auto const n = dataset.rows();
    auto const held = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction));
    if (held == 0 || held == n) {
        throw Error(ErrorKind::data, "holdout leaves an empty partition");
    }
    auto const cut = n - held;
    auto const width = dataset.columns();
    Dataset train = dataset;
    Dataset test = dataset;
    train.values.assign(dataset.values.begin(), dataset.values.begin() + static_cast<std::ptrdiff_t>(cut * width));
    train.targets.assign(dataset.targets.begin(), dataset.targets.begin() + static_cast<std::ptrdiff_t>(cut));
    test.values.assign(dataset.values.begin() + static_cast<std::ptrdiff_t>(cut * width), dataset.values.end());
    test.targets.assign(dataset.targets.begin() + static_cast<std::ptrdiff_t>(cut), dataset.targets.end());
    train.id += ":train";
    test.id += ":test";
    return { std::move(train), std::move(test) };
}

std::string format_double(double value)
{
    char buf[32];
    auto const res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

} // namespace fpge
