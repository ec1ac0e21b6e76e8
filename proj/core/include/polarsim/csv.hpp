#pragma once

#include <string>
#include <vector>

namespace polarsim {

// Minimal CSV container: leading '#' comment lines, one header row, string
// cells. No quoting or embedded commas; every value this project writes is
// a number, a short token or a hash.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);                  // throws IoError
void write_csv(const std::string& path, const CsvTable& t);  // throws IoError

// Shortest exact decimal rendering (round-trips to the same double).
std::string format_double(double v);

}  // namespace polarsim
