#include "vdm/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "vdm/errors.hpp"

namespace vdm {

std::size_t CsvTable::col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing column: " + name);
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_col(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file: " + path);

    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            if (fields.size() != table.header.size()) {
                throw SchemaError("row with " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(table.header.size()) +
                                  " in " + path);
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) throw SchemaError("empty CSV (no header): " + path);
    return table;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw SchemaError("not a number: '" + s + "' (" + context + ")");
    }
    return v;
}

int parse_int(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') {
        throw SchemaError("not an integer: '" + s + "' (" + context + ")");
    }
    return static_cast<int>(v);
}

} // namespace vdm
