#include "mct/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mct/errors.hpp"

namespace mct {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

double to_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != e)
    throw Error(ErrorCode::ConfigInvalid, what + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigInvalid, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw Error(ErrorCode::ConfigInvalid, where + ": invalid key '" + key + "'");
    c.values_[key] = value;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(get(key), key) : fallback;
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = to_double(get(key), key);
  if (v != static_cast<double>(static_cast<int>(v))) throw Error(ErrorCode::ConfigInvalid, key + ": expected an integer");
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::ConfigInvalid, key + ": expected true or false");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  return has(key) ? parse_doubles(get(key), key) : std::vector<double>{};
}

std::vector<std::string> Config::get_strings(const std::string& key) const {
  std::vector<std::string> out;
  if (!has(key)) return out;
  std::string v = trim(get(key));
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string Config::dump() const {
  std::ostringstream os;
  std::string section;
  for (const auto& [k, v] : values_) {
    const auto dot = k.find('.');
    const std::string s = dot == std::string::npos ? "" : k.substr(0, dot);
    if (s != section && !os.str().empty()) os << '\n';
    section = s;
    os << k << " = " << v << '\n';
  }
  return os.str();
}

void Config::require_known(const std::vector<std::string>& known) const {
  std::string unknown;
  for (const auto& [k, v] : values_) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const std::string& p) {
      return p == k || (!p.empty() && p.back() == '.' && k.rfind(p, 0) == 0);
    });
    if (!ok) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw Error(ErrorCode::ConfigInvalid, origin_ + ": unknown keys: " + unknown);
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::string v = trim(text);
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(item, what));
  }
  return out;
}

Point parse_point(const std::string& text) {
  const auto v = parse_doubles(text, "point");
  if (v.empty() || v.size() > 3) throw Error(ErrorCode::ConfigInvalid, "point needs 1 to 3 coordinates: " + text);
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return p;
}

}  // namespace mct
