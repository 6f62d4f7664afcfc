#include "flowrl/flow/config.hpp"

#include <sstream>

#include "flowrl/errors.hpp"

namespace flowrl::flow {

void FlowConfig::validate() const {
  std::ostringstream err;
  if (reynolds <= 0.0) {
    err << "reynolds must be positive, got " << reynolds;
  } else if (diameter_lu < 8) {
    err << "diameter_lu must be at least 8 cells, got " << diameter_lu;
  } else if (u_max_lb <= 0.0 || u_max_lb > 0.1) {
    err << "u_max_lb must lie in (0, 0.1], got " << u_max_lb;
  } else if (tau() <= 0.5) {
    err << "relaxation time tau = " << tau() << " is not above the stability bound 0.5";
  } else if (with_cylinder) {
    // The cylinder must sit strictly inside the channel.
    const double r = radius_lu();
    const double cx = cylinder_cx();
    const double cy = cylinder_cy();
    if (cx - r <= 0.5 || cx + r >= nx() - 1.5 || cy - r <= 0.5 || cy + r >= ny() - 1.5) {
      err << "cylinder of radius " << r << " overlaps the domain boundary";
    }
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw ConfigError("flow config: " + msg);
}

double inlet_velocity(const FlowConfig& cfg, double y_node) {
  const double h = static_cast<double>(cfg.ny());
  const double y = y_node + 0.5;
  if (y < 0.0 || y > h) throw ConfigError("inlet_velocity: y outside the channel");
  return 4.0 * cfg.u_max_lb * y * (h - y) / (h * h);
}

}  // namespace flowrl::flow
