#include "spinkin/output.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <unistd.h>

#include "spinkin/common.hpp"

namespace spinkin {

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + fmt::format(".tmp{}", static_cast<long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out += ',';
        out += header[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += fmt::format("{:.17g}", row[c] == 0.0 ? 0.0 : row[c]);
        }
        out += '\n';
    }
    return out;
}

std::size_t CsvData::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name) return c;
    throw ConfigError("CSV column '" + name + "' not found");
}

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    CsvData data;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) data.header.push_back(cell);
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
            }
        }
        if (row.size() != data.header.size())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": wrong number of columns");
        data.rows.push_back(std::move(row));
    }
    return data;
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series) {
    const double width = 720, height = 440, left = 90, right = 170, top = 40, bottom = 60;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
            xmin = std::min(xmin, s.x[k]);
            xmax = std::max(xmax, s.x[k]);
            ymin = std::min(ymin, s.y[k]);
            ymax = std::max(ymax, s.y[k]);
        }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) {
        const double pad = ymin == 0.0 ? 0.5 : 0.5 * std::abs(ymin);
        ymin -= pad;
        ymax += pad;
    }
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        width, height);
    out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", left + pw / 2,
                       escape(title));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                       top, pw, ph);
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4.0, yv = ymin + (ymax - ymin) * t / 4.0;
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n", px(xv),
                           top + ph + 18, xv);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.6g}</text>\n", left - 6, py(yv) + 4,
                           yv);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2, height - 16,
                       escape(x_label));
    out += fmt::format("<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
                       top + ph / 2, top + ph / 2, escape(y_label));
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = colours[s % 6];
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", colour);
        for (std::size_t k = 0; k < series[s].x.size() && k < series[s].y.size(); ++k)
            out += fmt::format("{:.2f},{:.2f} ", px(series[s].x[k]), py(series[s].y[k]));
        out += "\"/>\n";
        const double ly = top + 16 + 18 * s;
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           width - right + 12, ly, width - right + 36, ly, colour);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", width - right + 42, ly + 4, escape(series[s].label));
    }
    out += "</svg>\n";
    return out;
}

void write_field_file(const std::string& path, const FieldFile& field) {
    for (const auto& c : field.components)
        if (c.size() != field.grid.size()) throw std::invalid_argument("field component does not match its grid");
    if (field.names.size() != field.components.size())
        throw std::invalid_argument("field needs one name per component");
    const Grid3& g = field.grid;
    std::string out = "spinkin-field 1\n";
    out += fmt::format("dims {} {} {}\n", g.nx, g.ny, g.nz);
    out += fmt::format("spacing {:.17g} {:.17g} {:.17g}\n", g.dx, g.dy, g.dz);
    out += fmt::format("origin {:.17g} {:.17g} {:.17g}\n", g.x0, g.y0, g.z0);
    out += "units " + (field.units.empty() ? std::string("1") : field.units) + "\n";
    out += "components";
    for (const auto& n : field.names) out += " " + n;
    out += "\nencoding float64-le\nend\n";
    for (const auto& c : field.components) {
        for (double v : c) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
            char bytes[8];
            std::memcpy(bytes, &bits, 8);
            out.append(bytes, 8);
        }
    }
    write_file_atomic(path, out);
}

FieldFile read_field_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open field file '" + path + "'");
    FieldFile f;
    std::string line;
    if (!std::getline(in, line) || line != "spinkin-field 1") throw ConfigError("'" + path + "' is not a field file");
    while (std::getline(in, line) && line != "end") {
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "dims") ss >> f.grid.nx >> f.grid.ny >> f.grid.nz;
        else if (key == "spacing") ss >> f.grid.dx >> f.grid.dy >> f.grid.dz;
        else if (key == "origin") ss >> f.grid.x0 >> f.grid.y0 >> f.grid.z0;
        else if (key == "units") ss >> f.units;
        else if (key == "components") {
            std::string n;
            while (ss >> n) f.names.push_back(n);
        } else if (key == "encoding") {
            std::string enc;
            ss >> enc;
            if (enc != "float64-le") throw ConfigError("unsupported field encoding '" + enc + "'");
        }
    }
    for (std::size_t c = 0; c < f.names.size(); ++c) {
        std::vector<double> values(f.grid.size());
        for (double& v : values) {
            char bytes[8];
            if (!in.read(bytes, 8)) throw ConfigError("field file '" + path + "' is truncated");
            std::uint64_t bits;
            std::memcpy(&bits, bytes, 8);
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
            std::memcpy(&v, &bits, 8);
        }
        f.components.push_back(std::move(values));
    }
    return f;
}

}  // namespace spinkin
