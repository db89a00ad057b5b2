#pragma once

// Minimal deterministic SVG line charts (static vector plots of estimate vs
// truth). No external renderer: a handful of polylines, axes, and a legend.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swdiff {

struct PlotSeries {
    std::string label;
    const std::vector<double>* times = nullptr;
    const std::vector<double>* values = nullptr;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline const char* plot_color(std::size_t i) {
    static const char* palette[] = {"#444444", "#d62728", "#1f77b4", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

// Round outward to a tidy tick step (1/2/5 * 10^n covering span/5).
inline double tick_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    if (norm <= 1.0) return mag;
    if (norm <= 2.0) return 2.0 * mag;
    if (norm <= 5.0) return 5.0 * mag;
    return 10.0 * mag;
}

}  // namespace detail

inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::string& x_label, const std::string& y_label,
                           const std::vector<PlotSeries>& series,
                           const std::vector<std::pair<std::string, std::string>>& header = {},
                           std::size_t max_points_per_series = 1500) {
    if (series.empty()) throw std::invalid_argument("write_svg_plot: no series");
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const auto& s : series) {
        if (s.times == nullptr || s.values == nullptr || s.times->size() != s.values->size() ||
            s.times->empty())
            throw std::invalid_argument("write_svg_plot: malformed series '" + s.label + "'");
        for (std::size_t j = 0; j < s.times->size(); ++j) {
            const double x = (*s.times)[j], y = (*s.values)[j];
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double W = 960, H = 560, ml = 90, mr = 30, mt = 50, mb = 60;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    for (const auto& [key, value] : header) out << "<!-- " << key << " = " << value << " -->\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"18\">"
        << title << "</text>\n";

    // Axes box and ticks.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const double xs = detail::tick_step(xmax - xmin), ys = detail::tick_step(ymax - ymin);
    for (double x = std::ceil(xmin / xs) * xs; x <= xmax + 1e-12 * xs; x += xs) {
        out << "<line x1=\"" << detail::svg_num(X(x)) << "\" y1=\"" << mt + ph << "\" x2=\""
            << detail::svg_num(X(x)) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << detail::svg_num(X(x)) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::svg_num(x) << "</text>\n";
    }
    for (double y = std::ceil(ymin / ys) * ys; y <= ymax + 1e-12 * ys; y += ys) {
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::svg_num(Y(y)) << "\" x2=\"" << ml
            << "\" y2=\"" << detail::svg_num(Y(y)) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(Y(y) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::svg_num(y) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << x_label
        << "</text>\n";
    out << "<text x=\"20\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 "
        << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    // Series polylines, decimated to bound the file size.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const std::size_t n = s.times->size();
        const std::size_t stride = std::max<std::size_t>(1, n / max_points_per_series);
        out << "<polyline fill=\"none\" stroke=\"" << detail::plot_color(si)
            << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t j = 0; j < n; j += stride) {
            out << detail::svg_num(X((*s.times)[j])) << "," << detail::svg_num(Y((*s.values)[j]))
                << " ";
        }
        if ((n - 1) % stride != 0)
            out << detail::svg_num(X(s.times->back())) << "," << detail::svg_num(Y(s.values->back()));
        out << "\"/>\n";
        const double ly = mt + 18 + 18 * static_cast<double>(si);
        out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 120
            << "\" y2=\"" << ly << "\" stroke=\"" << detail::plot_color(si)
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw - 114 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace swdiff
