// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "fpge/error.hpp"
#include "fpge/landscape/scan.hpp"

namespace fpge {

namespace {

constexpr int kLeft = 80;
constexpr int kRight = 80;
constexpr int kTop = 40;
constexpr int kBottom = 50;
constexpr int kTicks = 5;

std::string num(double v, char const* fmt = "%.2f")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string escape_xml(std::string_view text)
{
    std::string out;
    for (auto c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;

    void include(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle()
    {
        if (!(hi > lo)) {
            hi = lo + 1.0;
        }
    }
};

class Plot {
public:
    Plot(SvgOptions const& o, Axis x)
        : o_(o)
        , x_(x)
        , w_(o.width - kLeft - kRight)
        , h_(o.height - kTop - kBottom)
    {
    }

    [[nodiscard]] double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * w_; }
    [[nodiscard]] double py(double v, Axis const& y) const { return kTop + h_ - (v - y.lo) / (y.hi - y.lo) * h_; }

    // Polyline segments split wherever a sample is missing.
    void series(std::string& out, std::vector<double> const& xs, std::vector<std::optional<double>> const& ys, Axis const& y,
        char const* colour) const
    {
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1\" points=\"" + points + "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!ys[i]) {
                flush();
                continue;
            }
            if (!points.empty()) {
                points += ' ';
            }
            points += num(px(xs[i])) + "," + num(py(*ys[i], y));
        }
        flush();
    }

    void y_axis(std::string& out, Axis const& y, bool right, char const* colour, std::string const& label) const
    {
        auto const x = right ? kLeft + w_ : kLeft;
        out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x) + "\" y2=\"" + num(kTop + h_)
            + "\" stroke=\"" + colour + "\"/>\n";
        for (int t = 0; t <= kTicks; ++t) {
            auto const v = y.lo + (y.hi - y.lo) * t / kTicks;
            auto const yy = py(v, y);
            auto const tx = right ? x + 6 : x - 6;
            out += "<text x=\"" + num(tx) + "\" y=\"" + num(yy + 4) + "\" font-size=\"11\" fill=\"" + colour
                + "\" text-anchor=\"" + (right ? "start" : "end") + "\">" + num(v, "%.3g") + "</text>\n";
        }
        auto const lx = right ? o_.width - 15 : 15;
        out += "<text transform=\"translate(" + num(lx) + "," + num(kTop + h_ / 2.0) + ") rotate(-90)\" font-size=\"12\" fill=\""
            + colour + "\" text-anchor=\"middle\">" + escape_xml(label) + "</text>\n";
    }

    void x_axis(std::string& out) const
    {
        out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + h_) + "\" x2=\"" + num(kLeft + w_) + "\" y2=\""
            + num(kTop + h_) + "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= kTicks; ++t) {
            auto const v = x_.lo + (x_.hi - x_.lo) * t / kTicks;
            out += "<text x=\"" + num(px(v)) + "\" y=\"" + num(kTop + h_ + 16) + "\" font-size=\"11\" text-anchor=\"middle\">"
                + num(v, "%.6g") + "</text>\n";
        }
        out += "<text x=\"" + num(kLeft + w_ / 2.0) + "\" y=\"" + num(o_.height - 10) + "\" font-size=\"12\" text-anchor=\"middle\">val</text>\n";
    }

private:
    SvgOptions const& o_;
    Axis x_;
    double w_;
    double h_;
};

} // namespace

std::string render_svg(Scan const& scan, SvgOptions const& options)
{
    if (options.width <= kLeft + kRight || options.height <= kTop + kBottom) {
        throw std::invalid_argument("render_svg: canvas too small");
    }
    auto const n = scan.records.size();
    std::vector<double> xs(n);
    std::vector<std::optional<double>> fit(n);
    std::vector<std::optional<double>> nodes(n);
    Axis x { 0.0, 0.0 };
    Axis yf { 0.0, 0.0 };
    Axis yn { 0.0, 0.0 };
    bool any_fitness = false;
    for (std::size_t i = 0; i < n; ++i) {
        auto const& r = scan.records[i];
        xs[i] = r.val.to_double();
        if (i == 0) {
            x = { xs[i], xs[i] };
        }
        x.include(xs[i]);
        if (r.valid) {
            nodes[i] = static_cast<double>(r.nodes);
            yn.include(*nodes[i]);
        }
        if (!r.fitness.is_worst()) {
            auto const v = options.log_fitness ? std::log10(1.0 + r.fitness.value) : r.fitness.value;
            if (!any_fitness) {
                yf = { v, v };
            }
            any_fitness = true;
            fit[i] = v;
            yf.include(v);
        }
    }
    x.settle();
    yf.settle();
    yn.settle();

    Plot const plot(options, x);
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\""
        + std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " "
        + std::to_string(options.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        out += "<text x=\"" + num(options.width / 2.0) + "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
            + escape_xml(options.title) + "</text>\n";
    }
    plot.x_axis(out);
    bool const draw_fitness = options.show_fitness && any_fitness;
    if (draw_fitness) {
        plot.y_axis(out, yf, false, "blue", options.log_fitness ? "log10(1 + fitness)" : "fitness");
        plot.series(out, xs, fit, yf, "blue");
    }
    if (options.show_nodes) {
        plot.y_axis(out, yn, true, "red", "nodes");
        plot.series(out, xs, nodes, yn, "red");
    }
    if (draw_fitness && options.mark_best) {
        auto const [index, record] = best(scan);
        out += "<text class=\"best\" x=\"" + num(plot.px(xs[index])) + "\" y=\"" + num(plot.py(*fit[index], yf) + 8)
            + "\" font-size=\"22\" fill=\"black\" text-anchor=\"middle\">*</text>\n";
        (void)record;
    }
    out += "</svg>\n";
    return out;
}

void write_svg(Scan const& scan, std::filesystem::path const& path, SvgOptions const& options)
{
    auto const text = render_svg(scan, options);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
    }
}

} // namespace fpge
