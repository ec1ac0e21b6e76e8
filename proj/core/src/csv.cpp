#include "polarsim/csv.hpp"

#include <charconv>
#include <fstream>

#include "polarsim/errors.hpp"

namespace polarsim {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open csv file: " + path);
    CsvTable t;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!have_header) t.comments.push_back(line);
            continue;
        }
        if (!have_header) {
            t.header = split_commas(line);
            have_header = true;
            continue;
        }
        auto row = split_commas(line);
        if (row.size() != t.header.size()) {
            throw IoError(path + ": line " + std::to_string(lineno) + ": expected " +
                          std::to_string(t.header.size()) + " fields, got " +
                          std::to_string(row.size()));
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw IoError(path + ": no header row found");
    return t;
}

void write_csv(const std::string& path, const CsvTable& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open csv file for writing: " + path);
    for (const auto& c : t.comments) out << c << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        out << (i ? "," : "") << t.header[i];
    }
    out << "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) {
            throw IoError("csv row width does not match header: " + path);
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << "\n";
    }
    if (!out.good()) throw IoError("failed while writing csv: " + path);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace polarsim
