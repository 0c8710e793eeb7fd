#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplicial/matrix.hpp"

namespace simplicial {

// Shortest representation that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::vector<std::string_view> split_fields(std::string_view line, char sep);
std::string_view trim(std::string_view text);

// Whitespace-separated matrix block: "rows cols" line, then one line per row.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

// Reads the whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace simplicial
