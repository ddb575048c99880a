#pragma once

#include <string>
#include <vector>

namespace bvine::io {

/// Shortest round-trippable decimal representation (17 significant digits).
std::string format_full(double x);

/// Fixed notation with 6 decimals, for human-readable tables.
std::string format_table(double x);

std::vector<std::string> split(const std::string& line, char delim);
std::string trim(const std::string& s);

/// Guess the column delimiter of a header line; candidates are
/// comma, semicolon, tab and space.
char detect_delimiter(const std::string& header_line);

struct DelimitedFile {
  std::vector<std::string> comments;  // leading lines starting with '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  char delimiter = ',';
};

DelimitedFile read_delimited(const std::string& path);

void write_delimited(const std::string& path, const std::vector<std::string>& comments,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows, char delimiter = ',');

double parse_double(const std::string& s);  // throws on garbage

}  // namespace bvine::io
