#pragma once

#include <string>
#include <vector>

namespace vdm {

// Minimal CSV support for the file formats this tool owns: comma-separated,
// no quoting, UTF-8, lines starting with '#' are comments.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; throws SchemaError when absent.
    std::size_t col(const std::string& name) const;
    bool has_col(const std::string& name) const;
};

std::vector<std::string> split_csv_line(const std::string& line);

// Reads a CSV file; first non-comment line is the header. Each row is padded
// or checked against the header width (ragged rows throw SchemaError).
CsvTable read_csv(const std::string& path);

// Fixed, locale-independent float formatting (12 significant digits) so
// repeated runs produce identical bytes.
std::string fmt_double(double v);

// Parses a double; throws SchemaError on garbage. Empty string is the
// caller's business (missing cells).
double parse_double(const std::string& s, const std::string& context);
int parse_int(const std::string& s, const std::string& context);

} // namespace vdm
