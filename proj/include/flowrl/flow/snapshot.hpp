#pragma once

#include <cstdint>
#include <string>

namespace flowrl::flow {

// Field snapshot record: little-endian binary, header then payload.
inline constexpr char kSnapshotMagic[8] = {'F', 'L', 'O', 'W', 'S', 'N', 'A', 'P'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t diameter_lu = 0;
  std::uint8_t with_cylinder = 1;
  double reynolds = 0.0;
  double u_max_lb = 0.0;
  double ramp_time_units = 0.0;
  std::uint64_t step_index = 0;
};

/// Reads only the header of a snapshot file (for inspection and dispatch).
SnapshotHeader read_snapshot_header(const std::string& path);

}  // namespace flowrl::flow
