#include "flowrl/flow/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "flowrl/errors.hpp"
#include "flowrl/flow/lattice.hpp"

namespace flowrl::flow {

namespace {

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::ifstream& in, void* p, std::size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw ConfigError("snapshot: truncated file");
}

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  write_bytes(out, &v, sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  read_bytes(in, &v, sizeof(T));
  return v;
}

SnapshotHeader read_header(std::ifstream& in, const std::string& path) {
  char magic[8];
  read_bytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0)
    throw ConfigError("snapshot: bad magic in " + path);
  SnapshotHeader h;
  h.version = read_pod<std::uint32_t>(in);
  if (h.version != kSnapshotVersion)
    throw ConfigError("snapshot: unsupported version in " + path);
  h.nx = read_pod<std::uint32_t>(in);
  h.ny = read_pod<std::uint32_t>(in);
  h.diameter_lu = read_pod<std::uint32_t>(in);
  h.with_cylinder = read_pod<std::uint8_t>(in);
  h.reynolds = read_pod<double>(in);
  h.u_max_lb = read_pod<double>(in);
  h.ramp_time_units = read_pod<double>(in);
  h.step_index = read_pod<std::uint64_t>(in);
  return h;
}

}  // namespace

SnapshotHeader read_snapshot_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("snapshot: cannot open " + path);
  return read_header(in, path);
}

void LatticeField::save_snapshot(const std::string& path) const {
  refresh_macros();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("snapshot: cannot write " + path);
  write_bytes(out, kSnapshotMagic, sizeof(kSnapshotMagic));
  write_pod(out, kSnapshotVersion);
  write_pod(out, static_cast<std::uint32_t>(nx_));
  write_pod(out, static_cast<std::uint32_t>(ny_));
  write_pod(out, static_cast<std::uint32_t>(cfg_.diameter_lu));
  write_pod(out, static_cast<std::uint8_t>(cfg_.with_cylinder ? 1 : 0));
  write_pod(out, cfg_.reynolds);
  write_pod(out, cfg_.u_max_lb);
  write_pod(out, cfg_.ramp_time_units);
  write_pod(out, static_cast<std::uint64_t>(step_));
  write_bytes(out, f_.data(), f_.size() * sizeof(double));
  write_bytes(out, rho_.data(), rho_.size() * sizeof(double));
  write_bytes(out, ux_.data(), ux_.size() * sizeof(double));
  write_bytes(out, uy_.data(), uy_.size() * sizeof(double));
  if (!out) throw ConfigError("snapshot: write failed for " + path);
}

LatticeField LatticeField::load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("snapshot: cannot open " + path);
  const SnapshotHeader h = read_header(in, path);

  FlowConfig cfg;
  cfg.reynolds = h.reynolds;
  cfg.diameter_lu = static_cast<int>(h.diameter_lu);
  cfg.u_max_lb = h.u_max_lb;
  cfg.with_cylinder = h.with_cylinder != 0;
  cfg.ramp_time_units = h.ramp_time_units;

  LatticeField field(cfg);
  if (static_cast<std::uint32_t>(field.nx()) != h.nx ||
      static_cast<std::uint32_t>(field.ny()) != h.ny)
    throw ConfigError("snapshot: dimensions inconsistent with configuration");

  read_bytes(in, field.f_.data(), field.f_.size() * sizeof(double));
  read_bytes(in, field.rho_.data(), field.rho_.size() * sizeof(double));
  read_bytes(in, field.ux_.data(), field.ux_.size() * sizeof(double));
  read_bytes(in, field.uy_.data(), field.uy_.size() * sizeof(double));
  field.step_ = static_cast<long>(h.step_index);
  field.macros_dirty_ = false;
  field.has_stepped_ = false;
  return field;
}

}  // namespace flowrl::flow
