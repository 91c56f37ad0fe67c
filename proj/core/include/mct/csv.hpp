#pragma once

#include <string>
#include <vector>

namespace mct {

/// Shortest decimal form that round-trips (%.17g).
std::string format_double(double v);

/// Minimal CSV table: header row plus string cells. No quoting; cells never
/// contain commas in the files written here.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws IoError if absent
  double number(std::size_t row, const std::string& name) const;

  void add_row(const std::vector<double>& values);
  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);
};

}  // namespace mct
