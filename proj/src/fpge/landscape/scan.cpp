// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/landscape/scan.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fpge/error.hpp"
#include "fpge/precision/rng.hpp"
#include "fpge/util/parallel.hpp"

namespace fpge {

namespace {

constexpr std::string_view kHeader = "val,fitness,nodes,valid,invalid_reason";

[[noreturn]] void data_error(std::string const& what) { throw Error(ErrorKind::data, what); }

std::uint32_t small_count(std::size_t n, std::string_view what)
{
    if (n == 0 || n > 0xffffffffULL) {
        throw Error(ErrorKind::usage, std::string(what) + " must be in [1, 2^32)");
    }
    return static_cast<std::uint32_t>(n);
}

std::string read_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        data_error("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto const at = line.find(sep, start);
        out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) {
            return out;
        }
        start = at + 1;
    }
}

template <typename T>
T parse_number(std::string_view text, std::string const& context)
{
    T value {};
    auto const res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc {} || res.ptr != text.data() + text.size()) {
        data_error(context + ": cannot parse '" + std::string(text) + "'");
    }
    return value;
}

void evaluate_all(Scan& result, std::vector<UnitFraction> const& vals, Grammar const& grammar, Dataset const& dataset,
    ScanSettings const& settings)
{
    result.records.resize(vals.size());
    parallel_for(vals.size(), settings.threads, [&](std::size_t j) {
        result.records[j] = evaluate_sample(vals[j], grammar, dataset, settings.order, settings.limits, settings.metric);
    });
}

} // namespace

ScanRecord evaluate_sample(UnitFraction const& val, Grammar const& grammar, Dataset const& dataset, DecodeOrder order,
    DecodeLimits const& limits, Metric metric)
{
    ScanRecord record { val, Fitness::worst(), 0, false, std::nullopt };
    auto const outcome = decode(val, grammar, order, limits);
    if (!outcome.valid()) {
        record.invalid_reason = outcome.reason();
        return record;
    }
    auto const& tree = outcome.as_valid().tree;
    record.valid = true;
    record.nodes = tree.node_count();
    record.fitness = fitness(render(tree), dataset, metric);
    return record;
}

Scan scan(Grammar const& grammar, Dataset const& dataset, ScanSettings const& settings, Rng& rng)
{
    check_limits(grammar, settings.limits);
    auto const n = small_count(settings.samples, "sample count");
    auto const precision = settings.precision;
    auto const unit = Natural::pow10(precision);

    auto step = unit;
    step.divmod_small(n);
    if (step < Natural(2)) {
        throw Error(ErrorKind::usage, "sample count too large for precision " + std::to_string(precision));
    }
    auto const offset = Natural(1) + random_at_most(rng, step - Natural(2));

    std::vector<UnitFraction> vals;
    vals.reserve(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        auto position = unit;
        position.mul_small(j);
        position.divmod_small(n);
        vals.emplace_back(offset + position, precision);
    }

    Scan result;
    result.meta.grammar_digest = grammar_digest(grammar);
    result.meta.order = settings.order;
    result.meta.limits = settings.limits;
    result.meta.samples = n;
    result.meta.offset = UnitFraction(offset, precision).to_string(false);
    result.meta.seed = settings.seed;
    result.meta.dataset_id = dataset.id;
    result.meta.precision = precision;
    result.meta.metric = settings.metric;
    evaluate_all(result, vals, grammar, dataset, settings);
    return result;
}

Scan scan(Grammar const& grammar, Dataset const& dataset, ScanSettings const& settings)
{
    Rng rng(settings.seed);
    return scan(grammar, dataset, settings, rng);
}

std::pair<std::size_t, ScanRecord const&> best(Scan const& scan)
{
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < scan.records.size(); ++i) {
        auto const& f = scan.records[i].fitness;
        if (!f.is_worst() && (!winner || f < scan.records[*winner].fitness)) {
            winner = i;
        }
    }
    if (!winner) {
        data_error("scan has no sample with a finite fitness");
    }
    return { *winner, scan.records[*winner] };
}

Scan zoom(Scan const& scan, std::size_t center_index, std::size_t count)
{
    auto const n = scan.records.size();
    if (n == 0) {
        throw std::invalid_argument("zoom: empty scan");
    }
    if (center_index >= n) {
        throw std::invalid_argument("zoom: center index out of range");
    }
    if (count == 0) {
        throw std::invalid_argument("zoom: window size must be positive");
    }
    count = std::min(count, n);
    auto start = center_index >= count / 2 ? center_index - count / 2 : 0;
    start = std::min(start, n - count);

    Scan window;
    window.meta = scan.meta;
    window.meta.window = "records " + std::to_string(start) + ".." + std::to_string(start + count - 1) + " around "
        + std::to_string(center_index);
    window.records.assign(scan.records.begin() + static_cast<std::ptrdiff_t>(start),
        scan.records.begin() + static_cast<std::ptrdiff_t>(start + count));
    return window;
}

Scan rescan(Scan const& window, Grammar const& grammar, Dataset const& dataset, ScanSettings const& settings,
    std::size_t samples)
{
    if (window.records.empty()) {
        throw std::invalid_argument("rescan: empty window");
    }
    check_limits(grammar, settings.limits);
    auto const n = small_count(samples, "rescan sample count");
    auto const& lo = window.records.front().val;
    auto const& hi = window.records.back().val;
    auto const width = hi.numerator() - lo.numerator();

    std::vector<UnitFraction> vals;
    vals.reserve(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        auto position = width;
        if (n > 1) {
            position.mul_small(j);
            position.divmod_small(n - 1);
        }
        else {
            position = Natural();
        }
        vals.emplace_back(lo.numerator() + position, lo.precision());
    }

    Scan result;
    result.meta = window.meta;
    result.meta.order = settings.order;
    result.meta.limits = settings.limits;
    result.meta.metric = settings.metric;
    result.meta.samples = n;
    result.meta.window = "rescan [" + lo.to_string() + ", " + hi.to_string() + "] at " + std::to_string(n) + " samples";
    evaluate_all(result, vals, grammar, dataset, settings);
    return result;
}

std::string format_scan_csv(Scan const& scan, std::string_view preamble)
{
    std::string out(preamble);
    auto const& m = scan.meta;
    auto meta = [&](std::string_view key, std::string const& value) {
        out += "# ";
        out += key;
        out += ": ";
        out += value;
        out += '\n';
    };
    meta("grammar", m.grammar_digest);
    meta("order", std::string(to_string(m.order)));
    meta("max-depth", std::to_string(m.limits.max_depth));
    meta("max-nodes", std::to_string(m.limits.max_nodes));
    meta("samples", std::to_string(m.samples));
    meta("offset", m.offset);
    meta("seed", std::to_string(m.seed));
    meta("dataset", m.dataset_id);
    meta("precision", std::to_string(m.precision));
    meta("metric", std::string(to_string(m.metric)));
    meta("window", m.window);
    out += kHeader;
    out += '\n';
    for (auto const& r : scan.records) {
        out += r.val.to_string(false);
        out += ',';
        out += format_double(r.fitness.value);
        out += ',';
        out += std::to_string(r.nodes);
        out += r.valid ? ",1," : ",0,";
        if (r.invalid_reason) {
            out += to_string(*r.invalid_reason);
        }
        out += '\n';
    }
    return out;
}

void write_scan_csv(Scan const& scan, std::filesystem::path const& path, std::string_view preamble)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    }
    out << format_scan_csv(scan, preamble);
    if (!out) {
        throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
    }
}

Scan parse_scan_csv(std::string_view text)
{
    Scan result;
    bool header = false;
    int line_no = 0;
    std::optional<std::uint32_t> precision;
    while (!text.empty()) {
        ++line_no;
        auto const eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view {} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto const where = "scan line " + std::to_string(line_no);
        if (line.empty()) {
            continue;
        }
        if (line.starts_with("# ")) {
            auto const colon = line.find(": ");
            auto const key = line.substr(2, colon == std::string_view::npos ? 0 : colon - 2);
            auto const value = colon == std::string_view::npos ? std::string_view {} : line.substr(colon + 2);
            auto& m = result.meta;
            if (key == "grammar") m.grammar_digest = value;
            else if (key == "order") m.order = parse_decode_order(value);
            else if (key == "max-depth") m.limits.max_depth = parse_number<std::uint32_t>(value, where);
            else if (key == "max-nodes") m.limits.max_nodes = parse_number<std::uint32_t>(value, where);
            else if (key == "samples") m.samples = parse_number<std::size_t>(value, where);
            else if (key == "offset") m.offset = value;
            else if (key == "seed") m.seed = parse_number<std::uint64_t>(value, where);
            else if (key == "dataset") m.dataset_id = value;
            else if (key == "precision") precision = m.precision = parse_number<std::uint32_t>(value, where);
            else if (key == "metric") m.metric = parse_metric(value);
            else if (key == "window") m.window = value;
            continue;
        }
        if (line.front() == '#') {
            continue;
        }
        if (!header) {
            if (line != kHeader) {
                data_error(where + ": expected header '" + std::string(kHeader) + "'");
            }
            header = true;
            continue;
        }
        auto const cells = split(line, ',');
        if (cells.size() != 5) {
            data_error(where + ": expected 5 cells, found " + std::to_string(cells.size()));
        }
        auto const dot = cells[0].find('.');
        auto const digits = dot == std::string_view::npos ? 0U : static_cast<std::uint32_t>(cells[0].size() - dot - 1);
        if (!precision) {
            precision = result.meta.precision = std::max(digits, 1U);
        }
        ScanRecord record { UnitFraction::parse(cells[0], *precision), Fitness::worst(), 0, false, std::nullopt };
        record.fitness.value = parse_number<double>(cells[1], where);
        record.nodes = parse_number<std::size_t>(cells[2], where);
        if (cells[3] != "0" && cells[3] != "1") {
            data_error(where + ": valid flag must be 0 or 1");
        }
        record.valid = cells[3] == "1";
        if (!cells[4].empty()) {
            record.invalid_reason = parse_invalid_reason(cells[4]);
            if (!record.invalid_reason) {
                data_error(where + ": unknown invalid reason '" + std::string(cells[4]) + "'");
            }
        }
        result.records.push_back(std::move(record));
    }
    if (!header) {
        data_error("scan CSV has no header");
    }
    return result;
}

Scan load_scan_csv(std::filesystem::path const& path)
{
    auto const text = read_file(path);
    try {
        return parse_scan_csv(text);
    }
    catch (Error const& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

} // namespace fpge
