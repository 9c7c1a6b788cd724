#include "finmcp/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace finmcp {

namespace {

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                          "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_grouped_bar_svg(const ChartSpec& spec) {
    const double width = 840, height = 480;
    const double left = 70, right = 30, top = 50, bottom = 90;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double y_max = spec.y_max;
    if (y_max <= 0) {
        for (const auto& s : spec.series)
            for (double v : s.values)
                if (std::isfinite(v)) y_max = std::max(y_max, v);
        if (y_max <= 0) y_max = 1.0;
        y_max *= 1.1;
    }

    const size_t n_groups = spec.groups.size();
    const size_t n_series = std::max<size_t>(1, spec.series.size());
    const double group_w = n_groups ? plot_w / static_cast<double>(n_groups) : plot_w;
    const double bar_w = group_w * 0.8 / static_cast<double>(n_series);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"17\" font-weight=\"bold\">"
        << escape(spec.title) << "</text>\n";

    // y axis with 5 ticks
    for (int t = 0; t <= 5; ++t) {
        const double frac = t / 5.0;
        const double y = top + plot_h * (1.0 - frac);
        svg << "<line x1=\"" << left << "\" y1=\"" << fmt(y) << "\" x2=\"" << width - right
            << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << fmt(y_max * frac) << "</text>\n";
    }
    if (!spec.y_label.empty())
        svg << "<text x=\"18\" y=\"" << fmt(top + plot_h / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
            << "transform=\"rotate(-90 18 " << fmt(top + plot_h / 2) << ")\">"
            << escape(spec.y_label) << "</text>\n";

    for (size_t g = 0; g < n_groups; ++g) {
        const double gx = left + group_w * static_cast<double>(g);
        for (size_t s = 0; s < spec.series.size(); ++s) {
            if (g >= spec.series[s].values.size()) continue;
            const double v = spec.series[s].values[g];
            if (!std::isfinite(v)) continue;
            const double h = plot_h * std::clamp(v / y_max, 0.0, 1.0);
            const double x = gx + group_w * 0.1 + bar_w * static_cast<double>(s);
            const double y = top + plot_h - h;
            svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
                << fmt(bar_w * 0.92) << "\" height=\"" << fmt(h) << "\" fill=\""
                << kPalette[s % 8] << "\"/>\n";
            svg << "<text x=\"" << fmt(x + bar_w * 0.46) << "\" y=\"" << fmt(y - 4)
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
                << fmt(v) << "</text>\n";
        }
        svg << "<text x=\"" << fmt(gx + group_w / 2) << "\" y=\"" << fmt(top + plot_h + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape(spec.groups[g]) << "</text>\n";
    }

    // legend row under the group labels
    double lx = left;
    const double ly = height - 40;
    for (size_t s = 0; s < spec.series.size(); ++s) {
        svg << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 11)
            << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[s % 8] << "\"/>\n";
        svg << "<text x=\"" << fmt(lx + 17) << "\" y=\"" << fmt(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape(spec.series[s].name) << "</text>\n";
        lx += 24 + 7.5 * static_cast<double>(spec.series[s].name.size());
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace finmcp
