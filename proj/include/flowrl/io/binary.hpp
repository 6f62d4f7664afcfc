#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "flowrl/errors.hpp"

namespace flowrl::io {

// Little-endian binary primitives for the versioned file formats.

inline void write_raw(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void read_raw(std::istream& in, void* p, std::size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw ConfigError("binary read: truncated stream");
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  write_raw(out, &v, sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  read_raw(in, &v, sizeof(T));
  return v;
}

inline void write_f64_array(std::ostream& out, std::span<const double> v) {
  write_pod<std::uint64_t>(out, v.size());
  write_raw(out, v.data(), v.size() * sizeof(double));
}

inline std::vector<double> read_f64_array(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  std::vector<double> v(n);
  read_raw(in, v.data(), n * sizeof(double));
  return v;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_pod<std::uint64_t>(out, s.size());
  write_raw(out, s.data(), s.size());
}

inline std::string read_string(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  std::string s(n, '\0');
  read_raw(in, s.data(), n);
  return s;
}

inline void expect_magic(std::istream& in, const char* magic, std::size_t n,
                         const std::string& what) {
  std::string got(n, '\0');
  read_raw(in, got.data(), n);
  if (got != std::string(magic, n)) throw ConfigError(what + ": bad magic");
}

}  // namespace flowrl::io
