#pragma once

#include <string>
#include <vector>

#include "spinkin/gauge.hpp"

namespace spinkin {

/// Writes to a sibling temporary file, then renames it over path.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Comma-separated, '.' decimal, LF line endings, 17 significant digits.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string str() const;
};

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header entry; throws if absent.
    std::size_t column(const std::string& name) const;
};

CsvData read_csv(const std::string& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line plot with axes and a legend.
std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series);

/// Header lines ("spinkin-field 1", dims, spacing, origin, units, components, encoding, end)
/// followed by little-endian float64 arrays, one per component.
struct FieldFile {
    Grid3 grid;
    std::string units;
    std::vector<std::string> names;
    std::vector<std::vector<double>> components;
};

void write_field_file(const std::string& path, const FieldFile& field);
FieldFile read_field_file(const std::string& path);

}  // namespace spinkin
