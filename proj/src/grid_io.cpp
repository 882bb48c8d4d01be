#include "lagtori/grid_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace lagtori {

namespace {

static_assert(sizeof(double) == 8);

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) throw std::runtime_error("read_binary: truncated grid container");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_binary(std::ostream& out, const GridFunction& f) {
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(f.dims()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(f.resolution()));
  for (double v : f.values()) put_le<double>(out, v);
}

GridFunction read_binary(std::istream& in) {
  const auto d = get_le<std::uint64_t>(in);
  const auto m = get_le<std::uint64_t>(in);
  if (d == 0 || d > 8 || m < 2 || m > (1u << 20))
    throw std::runtime_error("read_binary: implausible header");
  std::size_t n = 1;
  for (std::uint64_t a = 0; a < d; ++a) n *= static_cast<std::size_t>(m);
  std::vector<double> vals(n);
  for (auto& v : vals) v = get_le<double>(in);
  return GridFunction(static_cast<int>(d), static_cast<int>(m), std::move(vals));
}

void write_csv(std::ostream& out, const GridFunction& f) {
  for (int a = 0; a < f.dims(); ++a) out << 'x' << (a + 1) << ',';
  out << "value\n";
  fmt::memory_buffer line;
  for (std::size_t i = 0; i < f.size(); ++i) {
    line.clear();
    for (double x : f.point(i)) fmt::format_to(std::back_inserter(line), "{:.17g},", x);
    fmt::format_to(std::back_inserter(line), "{:.17g}\n", f[i]);
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

void save_binary(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_binary(out, f);
}

GridFunction load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_binary(in);
}

void save_csv(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(out, f);
}

}  // namespace lagtori
