#pragma once

#include <map>
#include <string>
#include <vector>

#include "mct/grid.hpp"

namespace mct {

/// Flat `key = value` configuration. Grammar, one entry per line:
///   line    := blank | comment | entry
///   comment := '#' anything
///   entry   := key '=' value [comment]
///   key     := dotted identifier, e.g. solver.cfl_safety
/// Lists are comma separated, optionally wrapped in [ ]. Later entries win.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void erase(const std::string& key) { values_.erase(key); }

  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  /// Serialized form that parse() reads back unchanged.
  std::string dump() const;

  /// Throws ConfigInvalid listing every key not in `known` (prefix entries
  /// ending in '.' accept any suffix).
  void require_known(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

/// Parses "x, y[, z]" into a point.
Point parse_point(const std::string& text);

std::vector<double> parse_doubles(const std::string& text, const std::string& what);

}  // namespace mct
