#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace lifeopt {

/// Shortest round-trip text for v; scientific when 0 < |v| < 1e-4.
std::string format_number(double v);

/// Comma-separated file with a header row, '.' decimals and LF line endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

/// Reads a file written by CsvWriter: header plus numeric rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace lifeopt
