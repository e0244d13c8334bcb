// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpge/decoder/decoder.hpp"
#include "fpge/evaluator/dataset.hpp"
#include "fpge/evaluator/fitness.hpp"
#include "fpge/grammar/grammar.hpp"
#include "fpge/precision/unit_fraction.hpp"

namespace fpge {

class Rng;

struct ScanRecord {
    UnitFraction val;
    Fitness fitness;
    // 0 for invalid decodes.
    std::size_t nodes = 0;
    bool valid = false;
    std::optional<InvalidReason> invalid_reason;
};

struct ScanMetadata {
    std::string grammar_digest;
    DecodeOrder order = DecodeOrder::dfs;
    DecodeLimits limits;
    std::size_t samples = 0;
    std::string offset;
    std::uint64_t seed = 0;
    std::string dataset_id;
    std::uint32_t precision = kDefaultPrecision;
    Metric metric = Metric::rmse;
    // Empty for a full scan; describes the extraction for zoom windows.
    std::string window;
};

struct Scan {
    std::vector<ScanRecord> records;
    ScanMetadata meta;
};

struct ScanSettings {
    DecodeOrder order = DecodeOrder::dfs;
    std::size_t samples = 25'000;
    DecodeLimits limits;
    std::uint64_t seed = 0;
    std::uint32_t precision = kDefaultPrecision;
    Metric metric = Metric::rmse;
    unsigned threads = 1;
};

ScanRecord evaluate_sample(UnitFraction const& val, Grammar const& grammar, Dataset const& dataset, DecodeOrder order,
    DecodeLimits const& limits, Metric metric = Metric::rmse);

// Samples val_j = offset + floor(j * 10^P / n) / 10^P for j < n, with the
// offset numerator uniform on [1, floor(10^P / n) - 1] drawn from rng.
// Sample evaluation is spread over settings.threads; the result does not
// depend on the thread count.
Scan scan(Grammar const& grammar, Dataset const& dataset, ScanSettings const& settings, Rng& rng);
// Same, seeding a generator from settings.seed.
Scan scan(Grammar const& grammar, Dataset const& dataset, ScanSettings const& settings);

// Lowest fitness, ties to the smaller val. Throws fpge::Error(ErrorKind::data)
// when every record is Worst.
std::pair<std::size_t, ScanRecord const&> best(Scan const& scan);

// `count` contiguous records centred on center_index, shifted inward at the
// ends; the whole scan if it has fewer records.
Scan zoom(Scan const& scan, std::size_t center_index, std::size_t count = 250);

// Re-samples the closed val interval spanned by `window` at `samples`
// evenly spaced points (endpoints included).
Scan rescan(Scan const& window, Grammar const& grammar, Dataset const& dataset, ScanSettings const& settings,
    std::size_t samples);

// Columns val,fitness,nodes,valid,invalid_reason; full-precision val,
// `inf` for Worst. Metadata travels as `# key: value` comment lines.
std::string format_scan_csv(Scan const& scan, std::string_view preamble = {});
void write_scan_csv(Scan const& scan, std::filesystem::path const& path, std::string_view preamble = {});
Scan parse_scan_csv(std::string_view text);
Scan load_scan_csv(std::filesystem::path const& path);

struct SvgOptions {
    int width = 960;
    int height = 420;
    std::string title;
    bool log_fitness = false;
    bool show_fitness = true;
    bool show_nodes = true;
    bool mark_best = true;
};

// Fitness (blue, left axis) and node count (red, right axis) against val,
// with the best sample marked by a black asterisk and gaps at invalid
// samples. A scan with no finite fitness renders node count only.
std::string render_svg(Scan const& scan, SvgOptions const& options = {});
void write_svg(Scan const& scan, std::filesystem::path const& path, SvgOptions const& options = {});

} // namespace fpge
