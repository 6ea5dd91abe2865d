#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace machclock {

/// Shortest "%.Ng" (N = 15..17) that round-trips.
std::string format_number(double v);

struct Column {
    std::string name;
    std::vector<double> values;
};

/// Comment preamble ("# key=value" lines), then the header row and one row per index.
void write_csv(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& preamble,
               const std::vector<Column>& columns);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static SVG line chart.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<PlotSeries>& series);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace machclock
