// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include <doctest.h>
#include <gmpxx.h>

#include <filesystem>
#include <limits>
#include <string>

#include "fpge/error.hpp"
#include "fpge/evaluator/dataset.hpp"
#include "fpge/grammar/grammar.hpp"
#include "fpge/landscape/scan.hpp"
#include "fpge/precision/rng.hpp"
#include "support/rational_oracle.hpp"

using fpge::Scan;
using fpge::ScanRecord;
using fpge::ScanSettings;
using fpge::UnitFraction;

namespace {

fpge::Grammar const& g0()
{
    static auto const g = fpge::parse_bnf("<e> ::= <e>+<e> | <e>*<e> | x | y | 1");
    return g;
}

fpge::Dataset const& data()
{
    static auto const d = [] {
        fpge::Dataset ds;
        ds.variable_names = { "x", "y" };
        for (int i = 0; i < 10; ++i) {
            ds.values.push_back(i);
            ds.values.push_back(1.0 / (i + 1));
            ds.targets.push_back(i * 0.5 + 1);
        }
        ds.id = "toy";
        return ds;
    }();
    return d;
}

ScanSettings settings(std::size_t n, fpge::DecodeOrder order = fpge::DecodeOrder::dfs)
{
    ScanSettings s;
    s.samples = n;
    s.order = order;
    s.seed = 31;
    s.precision = 30;
    s.limits = { 10, 300 };
    return s;
}

Scan synthetic(std::vector<double> const& fitness)
{
    Scan s;
    s.meta.precision = 4;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        ScanRecord r { UnitFraction(fpge::Natural(100 + i), 4), fpge::Fitness { fitness[i] }, 3, true, std::nullopt };
        if (fitness[i] == std::numeric_limits<double>::infinity()) {
            r.valid = false;
            r.nodes = 0;
            r.invalid_reason = fpge::InvalidReason::depth_exceeded;
        }
        s.records.push_back(r);
    }
    return s;
}

mpq_class q(UnitFraction const& v) { return oracle::from_decimal(v.to_string(false)); }

} // namespace

TEST_CASE("scan: sample positions")
{
    auto const s = fpge::scan(g0(), data(), settings(5));
    REQUIRE(s.records.size() == 5);
    auto const offset = q(UnitFraction::parse(s.meta.offset, 30));
    CHECK(offset > 0);
    CHECK(offset < mpq_class(1, 5));
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(q(s.records[j].val) == offset + mpq_class(j, 5));
        CHECK(s.records[j].val < UnitFraction::one(30));
    }
    CHECK(s.meta.samples == 5);
    CHECK(s.meta.dataset_id == "toy");
    CHECK(s.meta.grammar_digest == fpge::grammar_digest(g0()));
}

TEST_CASE("scan: spacing when n does not divide the scale")
{
    auto const s = fpge::scan(g0(), data(), settings(7));
    mpz_class const unit("1" + std::string(30, '0'));
    for (std::size_t j = 1; j < 7; ++j) {
        mpq_class const gap = (q(s.records[j].val) - q(s.records[j - 1].val)) * unit;
        CHECK(gap.get_den() == 1);
        mpz_class const steps = gap.get_num();
        CHECK((steps == unit / 7 || steps == unit / 7 + 1));
    }
}

TEST_CASE("scan: records agree with single evaluations and the invariants")
{
    auto const s = fpge::scan(g0(), data(), settings(300));
    for (std::size_t j = 0; j < s.records.size(); ++j) {
        auto const& r = s.records[j];
        auto const again = fpge::evaluate_sample(r.val, g0(), data(), fpge::DecodeOrder::dfs, { 10, 300 });
        CHECK(again.fitness == r.fitness);
        CHECK(again.nodes == r.nodes);
        CHECK(r.valid == (r.nodes > 0));
        CHECK(r.valid == !r.invalid_reason.has_value());
        if (!r.valid) {
            CHECK(r.fitness.is_worst());
        }
        if (j > 0) {
            CHECK(s.records[j - 1].val < r.val);
        }
    }
}

TEST_CASE("scan: deterministic and thread independent")
{
    auto a = settings(400);
    auto b = settings(400);
    b.threads = 4;
    CHECK(fpge::format_scan_csv(fpge::scan(g0(), data(), a)) == fpge::format_scan_csv(fpge::scan(g0(), data(), b)));
    auto c = settings(400);
    c.seed = 32;
    CHECK(fpge::format_scan_csv(fpge::scan(g0(), data(), a)) != fpge::format_scan_csv(fpge::scan(g0(), data(), c)));
}

TEST_CASE("scan: dfs and bfs landscapes differ")
{
    auto const d = fpge::scan(g0(), data(), settings(1000, fpge::DecodeOrder::dfs));
    auto const b = fpge::scan(g0(), data(), settings(1000, fpge::DecodeOrder::bfs));
    bool differ = false;
    for (std::size_t j = 0; j < 1000; ++j) {
        differ = differ || d.records[j].fitness != b.records[j].fitness;
    }
    CHECK(differ);
}

TEST_CASE("scan: sample count limits")
{
    auto s = settings(5);
    s.precision = 1;
    CHECK(fpge::scan(g0(), data(), s).records.size() == 5);
    s.samples = 6;
    CHECK_THROWS_AS(fpge::scan(g0(), data(), s), fpge::Error);
    s.samples = 0;
    CHECK_THROWS(fpge::scan(g0(), data(), s));
}

TEST_CASE("best: lowest fitness, ties to the smaller val")
{
    CHECK(fpge::best(synthetic({ 3, 1, 2 })).first == 1);
    CHECK(fpge::best(synthetic({ 1, 1 })).first == 0);
    auto const inf = std::numeric_limits<double>::infinity();
    CHECK(fpge::best(synthetic({ inf, 5, inf })).first == 1);
    CHECK_THROWS_AS(fpge::best(synthetic({ inf, inf })), fpge::Error);
}

TEST_CASE("zoom: windows are contiguous and clipped")
{
    std::vector<double> f(5, 1.0);
    auto const five = synthetic(f);
    auto const w = fpge::zoom(five, 0, 3);
    REQUIRE(w.records.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(w.records[i].val == five.records[i].val);
    }
    auto const right = fpge::zoom(five, 4, 3);
    CHECK(right.records.front().val == five.records[2].val);
    auto const mid = fpge::zoom(five, 2, 3);
    CHECK(mid.records.front().val == five.records[1].val);
    CHECK(fpge::zoom(five, 2, 10).records.size() == 5);
    CHECK_THROWS(fpge::zoom(five, 5, 3));
    CHECK_THROWS(fpge::zoom(Scan {}, 0, 3));
    CHECK(!w.meta.window.empty());
}

TEST_CASE("rescan: evenly spaced over the window interval")
{
    auto const s = fpge::scan(g0(), data(), settings(200));
    auto const w = fpge::zoom(s, 100, 11);
    auto const r = fpge::rescan(w, g0(), data(), settings(0), 21);
    REQUIRE(r.records.size() == 21);
    CHECK(r.records.front().val == w.records.front().val);
    CHECK(r.records.back().val == w.records.back().val);
    for (std::size_t j = 1; j < r.records.size(); ++j) {
        CHECK(r.records[j - 1].val < r.records[j].val);
    }
}

TEST_CASE("csv: exact round trip")
{
    auto const s = fpge::scan(g0(), data(), settings(250));
    auto const text = fpge::format_scan_csv(s, "# generated by a test\n");
    CHECK(text.find("val,fitness,nodes,valid,invalid_reason\n") != std::string::npos);
    auto const back = fpge::parse_scan_csv(text);
    REQUIRE(back.records.size() == s.records.size());
    for (std::size_t j = 0; j < s.records.size(); ++j) {
        CHECK(back.records[j].val == s.records[j].val);
        CHECK(back.records[j].fitness == s.records[j].fitness);
        CHECK(back.records[j].nodes == s.records[j].nodes);
        CHECK(back.records[j].valid == s.records[j].valid);
        CHECK(back.records[j].invalid_reason == s.records[j].invalid_reason);
    }
    CHECK(back.meta.offset == s.meta.offset);
    CHECK(back.meta.grammar_digest == s.meta.grammar_digest);
    CHECK(fpge::format_scan_csv(back) == fpge::format_scan_csv(s));
    // Worst is written as inf.
    CHECK(fpge::format_scan_csv(synthetic({ std::numeric_limits<double>::infinity() })).find(",inf,0,0,depth")
        != std::string::npos);
}

TEST_CASE("csv: malformed input")
{
    CHECK_THROWS_AS(fpge::parse_scan_csv("val,fitness\n"), fpge::Error);
    CHECK_THROWS_AS(fpge::parse_scan_csv("val,fitness,nodes,valid,invalid_reason\n0.5,1,2\n"), fpge::Error);
    CHECK_THROWS_AS(fpge::parse_scan_csv("val,fitness,nodes,valid,invalid_reason\n0.5,1,2,3,\n"), fpge::Error);
    CHECK_THROWS_AS(fpge::parse_scan_csv("val,fitness,nodes,valid,invalid_reason\n0.5,1,0,0,bogus\n"), fpge::Error);
    CHECK_THROWS_AS(fpge::parse_scan_csv("val,fitness,nodes,valid,invalid_reason\n7,1,2,1,\n"), fpge::Error);
}

TEST_CASE("svg: series, marker and degenerate scans")
{
    auto const s = fpge::scan(g0(), data(), settings(300));
    auto const svg = fpge::render_svg(s);
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("blue") != std::string::npos);
    CHECK(svg.find("red") != std::string::npos);
    CHECK(svg.find(">*<") != std::string::npos);

    fpge::SvgOptions nodes_only;
    nodes_only.show_fitness = false;
    CHECK(fpge::render_svg(s, nodes_only).find("blue") == std::string::npos);

    auto const inf = std::numeric_limits<double>::infinity();
    auto const all_bad = fpge::render_svg(synthetic({ inf, inf, inf }));
    CHECK(all_bad.find("blue") == std::string::npos);
    CHECK(all_bad.find("red") != std::string::npos);

    // Invalid samples split the fitness line into separate runs.
    auto const gaps = fpge::render_svg(synthetic({ 1, 2, inf, 3, 4 }));
    std::size_t polylines = 0;
    for (auto at = gaps.find("<polyline fill=\"none\" stroke=\"blue\""); at != std::string::npos; at = gaps.find("<polyline fill=\"none\" stroke=\"blue\"", at + 1)) {
        ++polylines;
    }
    CHECK(polylines == 2);

    fpge::SvgOptions log;
    log.log_fitness = true;
    log.title = "a < b & c";
    auto const titled = fpge::render_svg(s, log);
    CHECK(titled.find("a &lt; b &amp; c") != std::string::npos);
}
