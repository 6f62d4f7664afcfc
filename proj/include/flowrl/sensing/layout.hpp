#pragma once

#include <string>
#include <vector>

#include "flowrl/flow/lattice.hpp"

namespace flowrl::sensing {

enum class LayoutKind {
  kWake147,        ///< ring plus wake grid, 147 pressure probes
  kSurfaceRing,    ///< N probes on the surface, leading-edge point excluded
  kSingleSurface,  ///< one surface probe at a fixed azimuth
};

struct SensorPosition {
  double x = 0.0;  ///< diameter units from the domain origin
  double y = 0.0;
  double azimuth_deg = -1.0;  ///< surface probes only
  bool on_surface = false;
};

/// A sensor arrangement; positions are a pure function of (kind, parameter).
class SensorLayout {
 public:
  static SensorLayout wake147();
  static SensorLayout surface_ring(int n);
  static SensorLayout single_surface(double theta_deg);

  /// Parses the run-config grammar: "L1", "L2:<N>", "L3:<theta>".
  static SensorLayout parse(const std::string& spec);

  LayoutKind kind() const { return kind_; }
  int channels() const { return static_cast<int>(positions_.size()); }
  const std::vector<SensorPosition>& positions() const { return positions_; }
  std::string spec_string() const;

 private:
  SensorLayout(LayoutKind kind, int param);

  LayoutKind kind_;
  int param_ = 0;
  std::vector<SensorPosition> positions_;
};

struct SensorReading {
  double t = 0.0;
  std::vector<double> values;
};

/// Validates that every off-surface probe lands in fluid. Throws ConfigError.
/// Meant to run once at startup for a given field geometry.
void validate_layout(const SensorLayout& layout, const flow::LatticeField& field);

/// Samples nondimensional pressure at each probe of the layout.
SensorReading read_sensors(const flow::LatticeField& field, const SensorLayout& layout);

}  // namespace flowrl::sensing
