#include "bvine/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bvine::io {

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_table(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

char detect_delimiter(const std::string& header_line) {
  const char candidates[] = {',', ';', '\t', ' '};
  char best = ',';
  size_t best_count = 0;
  for (char c : candidates) {
    size_t count = std::count(header_line.begin(), header_line.end(), c);
    if (count > best_count) {
      best_count = count;
      best = c;
    }
  }
  return best;
}

DelimitedFile read_delimited(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  DelimitedFile out;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!have_header) out.comments.push_back(line);
      continue;
    }
    if (!have_header) {
      out.delimiter = detect_delimiter(line);
      for (auto& f : split(line, out.delimiter)) out.header.push_back(trim(f));
      have_header = true;
      continue;
    }
    std::vector<std::string> fields;
    for (auto& f : split(line, out.delimiter)) fields.push_back(trim(f));
    out.rows.push_back(std::move(fields));
  }
  if (!have_header) throw std::runtime_error("empty table: " + path);
  return out;
}

void write_delimited(const std::string& path, const std::vector<std::string>& comments,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows, char delimiter) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& c : comments) {
    out << (c.empty() || c[0] == '#' ? "" : "# ") << c << "\n";
  }
  auto write_row = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << delimiter;
      out << row[i];
    }
    out << "\n";
  };
  write_row(header);
  for (const auto& r : rows) write_row(r);
  if (!out) throw std::runtime_error("write failed: " + path);
}

double parse_double(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("not a number: '" + s + "'");
  }
}

}  // namespace bvine::io
