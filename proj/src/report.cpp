#include "lifeopt/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace lifeopt {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[400];
    const auto fmt = (v != 0.0 && std::abs(v) < 1e-4) ? std::chars_format::scientific : std::chars_format::fixed;
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, fmt);
    if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("csv row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) table.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc()) v = std::nan("");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace lifeopt
