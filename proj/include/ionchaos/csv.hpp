// CSV dialect: comma separated, '#' header lines, LF endings, %.17g floats.
#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ionchaos::csv {

/// Shortest form that still reads back bit-exactly (%.17g); nan/inf spelled out.
std::string format_double(double x);

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;  // "# key = value"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_notes;  // optional trailing text column, one per row
  std::string note_column;             // header for row_notes; empty when unused
};

void write(std::ostream& os, const Table& t);
void write(const std::filesystem::path& path, const Table& t);

/// Parse a file written by write().  A last column named note_column is read
/// as text into row_notes.
Table read(const std::filesystem::path& path, const std::string& note_column = "");

}  // namespace ionchaos::csv
