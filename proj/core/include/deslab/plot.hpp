#pragma once

#include <optional>
#include <string>
#include <vector>

namespace deslab {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<std::optional<double>> y; // gaps (undefined values) are skipped
};

/// Static SVG line chart: axes, tick labels, legend, one polyline per
/// series.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

/// Heatmap of a row-major n x n matrix, cells annotated to 2 decimals.
std::string heatmap_svg(const std::string& title, const std::vector<double>& cells, std::size_t n);

} // namespace deslab
