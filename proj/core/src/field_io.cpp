#include <bit>
#include <cstring>
#include <fstream>

#include "mct/errors.hpp"
#include "mct/grid.hpp"

namespace mct {

namespace {

constexpr char kMagic[4] = {'P', 'F', 'M', 'F'};

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_le(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::string& path) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorCode::IoError, "truncated dump " + path);
  return to_le(v);
}

}  // namespace

void write_field_dump(const std::string& path, const ScalarField& f, double epsilon, double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  os.write(kMagic, 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().resolution()));
  put<double>(os, epsilon);
  put<double>(os, time);
  for (double v : f.data()) put<double>(os, v);
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw Error(ErrorCode::IoError, "bad magic in " + path);
  FieldDump d;
  d.dim = get<std::uint32_t>(is, path);
  d.resolution = get<std::uint32_t>(is, path);
  d.epsilon = get<double>(is, path);
  d.time = get<double>(is, path);
  if (d.dim < 1 || d.dim > 3 || d.resolution < 1 || d.resolution > 65536)
    throw Error(ErrorCode::IoError, "implausible header in " + path);
  std::size_t count = 1;
  for (std::uint32_t a = 0; a < d.dim; ++a) count *= d.resolution;
  d.values.resize(count);
  for (auto& v : d.values) v = get<double>(is, path);
  return d;
}

ScalarField field_from_dump(const FieldDump& d) {
  PeriodicGrid g(static_cast<int>(d.dim), static_cast<int>(d.resolution));
  return ScalarField(g, d.values);
}

}  // namespace mct
