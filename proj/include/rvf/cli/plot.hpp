#pragma once

// Minimal deterministic SVG line charts.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvf::cli {

struct PlotSeries {
    std::string label;
    std::vector<double> values;
};

struct ChartOptions {
    std::string title;
    std::vector<std::string> x_labels; ///< optional tick labels, one per point
    int width = 900;
    int height = 420;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

} // namespace detail

/// One polyline per series on a shared linear y axis.
inline std::string line_chart(const std::vector<PlotSeries>& series, const ChartOptions& opt) {
    if (series.empty()) throw std::invalid_argument("plot: no series");
    std::size_t points = 0;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : series) {
        if (s.values.empty()) throw std::invalid_argument("plot: series '" + s.label + "' is empty");
        points = std::max(points, s.values.size());
        for (double v : s.values)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    }
    if (!std::isfinite(lo)) throw std::invalid_argument("plot: no finite values");
    if (hi == lo) {
        hi += 0.5 * (std::abs(hi) + 1e-300);
        lo -= 0.5 * (std::abs(lo) + 1e-300);
    }
    const double left = 80, right = 150, top = 40, bottom = 50;
    const double pw = opt.width - left - right, ph = opt.height - top - bottom;
    auto x_of = [&](std::size_t i) { return left + (points > 1 ? pw * static_cast<double>(i) / static_cast<double>(points - 1) : pw / 2); };
    auto y_of = [&](double v) { return top + ph * (hi - v) / (hi - lo); };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
                      std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + detail::fmt("%.1f", left) + "\" y=\"24\" font-size=\"15\">" + detail::escape(opt.title) + "</text>\n";
    svg += "<rect x=\"" + detail::fmt("%.1f", left) + "\" y=\"" + detail::fmt("%.1f", top) + "\" width=\"" +
           detail::fmt("%.1f", pw) + "\" height=\"" + detail::fmt("%.1f", ph) + "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        svg += "<text x=\"" + detail::fmt("%.1f", left - 6) + "\" y=\"" + detail::fmt("%.1f", y_of(v) + 4) +
               "\" text-anchor=\"end\">" + detail::fmt("%.3g", v) + "</text>\n";
    }
    if (!opt.x_labels.empty()) {
        const std::size_t step = std::max<std::size_t>(1, opt.x_labels.size() / 8);
        for (std::size_t i = 0; i < opt.x_labels.size(); i += step)
            svg += "<text x=\"" + detail::fmt("%.1f", x_of(i)) + "\" y=\"" + detail::fmt("%.1f", top + ph + 18) +
                   "\" text-anchor=\"middle\">" + detail::escape(opt.x_labels[i]) + "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = detail::kPalette[s % std::size(detail::kPalette)];
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < series[s].values.size(); ++i) {
            const double v = series[s].values[i];
            if (!std::isfinite(v)) continue;
            if (!first) svg += ' ';
            svg += detail::fmt("%.2f", x_of(i)) + "," + detail::fmt("%.2f", y_of(v));
            first = false;
        }
        svg += "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(s + 1);
        svg += "<text x=\"" + detail::fmt("%.1f", left + pw + 10) + "\" y=\"" + detail::fmt("%.1f", ly) + "\" fill=\"" +
               color + "\">" + detail::escape(series[s].label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace rvf::cli
