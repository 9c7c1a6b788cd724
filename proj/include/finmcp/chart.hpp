#pragma once
// Minimal grouped-bar SVG writer; enough for the report figures, no deps.

#include <string>
#include <vector>

namespace finmcp {

struct ChartSeries {
    std::string name;
    std::vector<double> values;  // one per group; NaN renders as a gap
};

struct ChartSpec {
    std::string title;
    std::string y_label;
    std::vector<std::string> groups;
    std::vector<ChartSeries> series;
    double y_max = 0.0;  // 0 = derived from data
};

// Deterministic output: fixed formatting, no timestamps or random ids.
std::string render_grouped_bar_svg(const ChartSpec& spec);

}  // namespace finmcp
