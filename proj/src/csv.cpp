#include "ionchaos/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ionchaos::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  // strtod, unlike stod, accepts subnormals
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

// notes may not carry separators or line breaks
std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write(std::ostream& os, const Table& t) {
  const bool notes = !t.note_column.empty();
  if (notes && t.row_notes.size() != t.rows.size())
    throw std::invalid_argument("csv: row note count differs from row count");
  for (const auto& [k, v] : t.metadata) os << "# " << k << " = " << v << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  if (notes) os << ',' << t.note_column;
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.columns.size()) throw std::invalid_argument("csv: row width differs from header");
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    if (notes) os << ',' << sanitize(t.row_notes[r]);
    os << '\n';
  }
}

void write(const std::filesystem::path& path, const Table& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(os, t);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Table read(const std::filesystem::path& path, const std::string& note_column) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  Table t;
  std::string line;
  bool header = false, notes = false;
  while (std::getline(is, line)) {
    if (!header && line.rfind("# ", 0) == 0) {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos) t.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    auto cells = split(line);
    if (!header) {
      header = true;
      notes = !note_column.empty() && !cells.empty() && cells.back() == note_column;
      if (notes) {
        t.note_column = note_column;
        cells.pop_back();
      }
      t.columns = std::move(cells);
      continue;
    }
    if (notes) {
      t.row_notes.push_back(cells.empty() ? std::string() : cells.back());
      if (!cells.empty()) cells.pop_back();
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    if (row.size() != t.columns.size())
      throw std::runtime_error(path.string() + ": row width differs from header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace ionchaos::csv
