#pragma once

// Output artifacts: CSV tables, JSON summary records, SVG line plots. All file
// writes are atomic (write to a temporary, then rename) and numeric formatting
// is locale-independent shortest-round-trip decimal.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace higgslab {

void write_text_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    void add_row(std::vector<std::string> values);
    std::string str() const;
    void write(const std::filesystem::path& path) const;
};

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title, xlabel, ylabel;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

// Self-contained vector plot of the tabular data; no display server involved.
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec);

} // namespace higgslab
