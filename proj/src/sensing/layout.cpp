#include "flowrl/sensing/layout.hpp"

#include <cmath>
#include <sstream>

#include "flowrl/errors.hpp"
#include "flowrl/flow/forces.hpp"

namespace flowrl::sensing {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Surface-azimuth convention: radial direction (-cos a, sin a), clockwise
// from the windward point, relative to the cylinder center (2D, 2D).
SensorPosition surface_point(double theta_deg, double r_over_d) {
  const double rad = theta_deg * kPi / 180.0;
  SensorPosition p;
  p.x = flow::kCylinderCenterXD - r_over_d * std::cos(rad);
  p.y = flow::kCylinderCenterYD + r_over_d * std::sin(rad);
  p.azimuth_deg = theta_deg;
  p.on_surface = false;
  return p;
}
}  // namespace

SensorLayout::SensorLayout(LayoutKind kind, int param) : kind_(kind), param_(param) {
  switch (kind_) {
    case LayoutKind::kWake147: {
      // Ring of 15 probes at r = 0.6 D plus a 12 x 11 wake grid spanning
      // x in [1, 6] D and y in [-1.5, 1.5] D around the cylinder center.
      for (int k = 0; k < 15; ++k) {
        positions_.push_back(surface_point(360.0 * k / 15.0, 0.6));
      }
      for (int gx = 0; gx < 12; ++gx) {
        for (int gy = 0; gy < 11; ++gy) {
          SensorPosition p;
          p.x = flow::kCylinderCenterXD + 1.0 + 5.0 * gx / 11.0;
          p.y = flow::kCylinderCenterYD - 1.5 + 3.0 * gy / 10.0;
          positions_.push_back(p);
        }
      }
      break;
    }
    case LayoutKind::kSurfaceRing: {
      if (param_ != 4 && param_ != 8 && param_ != 12 && param_ != 24 && param_ != 36)
        throw ConfigError("sensor layout: surface ring size must be one of 4, 8, 12, 24, 36");
      // theta_i = 2 pi i / (N + 1), i = 1..N: uniform with the front point left out.
      for (int i = 1; i <= param_; ++i) {
        SensorPosition p = surface_point(360.0 * i / (param_ + 1), 0.5);
        p.on_surface = true;
        positions_.push_back(p);
      }
      break;
    }
    case LayoutKind::kSingleSurface: {
      if (param_ < 0 || param_ > 180 || param_ % 15 != 0)
        throw ConfigError(
            "sensor layout: single-surface azimuth must be a multiple of 15 in [0, 180]");
      SensorPosition p = surface_point(static_cast<double>(param_), 0.5);
      p.on_surface = true;
      positions_.push_back(p);
      break;
    }
  }
}

SensorLayout SensorLayout::wake147() { return SensorLayout(LayoutKind::kWake147, 0); }
SensorLayout SensorLayout::surface_ring(int n) { return SensorLayout(LayoutKind::kSurfaceRing, n); }
SensorLayout SensorLayout::single_surface(double theta_deg) {
  return SensorLayout(LayoutKind::kSingleSurface, static_cast<int>(std::lround(theta_deg)));
}

SensorLayout SensorLayout::parse(const std::string& spec) {
  if (spec == "L1") return wake147();
  auto parse_param = [&](const std::string& prefix) -> int {
    const std::string tail = spec.substr(prefix.size());
    try {
      std::size_t used = 0;
      const int v = std::stoi(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(tail);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("sensor layout: cannot parse '" + spec + "'");
    }
  };
  if (spec.rfind("L2:", 0) == 0) return surface_ring(parse_param("L2:"));
  if (spec.rfind("L3:", 0) == 0) return single_surface(parse_param("L3:"));
  throw ConfigError("sensor layout: unknown spec '" + spec + "' (expected L1, L2:<N> or L3:<deg>)");
}

std::string SensorLayout::spec_string() const {
  switch (kind_) {
    case LayoutKind::kWake147:
      return "L1";
    case LayoutKind::kSurfaceRing:
      return "L2:" + std::to_string(param_);
    case LayoutKind::kSingleSurface:
      return "L3:" + std::to_string(param_);
  }
  return "?";
}

void validate_layout(const SensorLayout& layout, const flow::LatticeField& field) {
  const int d = field.config().diameter_lu;
  for (const SensorPosition& p : layout.positions()) {
    if (p.on_surface) continue;  // resolved through the surface-cell ring
    const int i = static_cast<int>(std::lround(p.x * d - 0.5));
    const int j = static_cast<int>(std::lround(p.y * d - 0.5));
    if (i < 0 || i >= field.nx() || j < 0 || j >= field.ny())
      throw ConfigError("sensor layout: probe outside the domain");
    if (field.solid(i, j)) {
      std::ostringstream err;
      err << "sensor layout: probe at (" << p.x << ", " << p.y << ") D lies in the obstacle";
      throw ConfigError(err.str());
    }
  }
}

SensorReading read_sensors(const flow::LatticeField& field, const SensorLayout& layout) {
  SensorReading reading;
  reading.t = field.time_units();
  reading.values.reserve(layout.positions().size());
  const double rho_mean = field.mean_fluid_density();
  const int d = field.config().diameter_lu;
  for (const SensorPosition& p : layout.positions()) {
    if (p.on_surface) {
      reading.values.push_back(flow::surface_pressure(field, p.azimuth_deg, rho_mean));
    } else {
      const int i = static_cast<int>(std::lround(p.x * d - 0.5));
      const int j = static_cast<int>(std::lround(p.y * d - 0.5));
      reading.values.push_back(field.pressure_nd(i, j, rho_mean));
    }
  }
  return reading;
}

}  // namespace flowrl::sensing
