#pragma once

#include <cmath>

namespace flowrl::flow {

// Channel geometry in cylinder diameters (confined-cylinder benchmark).
inline constexpr double kChannelLengthD = 22.0;
inline constexpr double kChannelHeightD = 4.1;
inline constexpr double kCylinderCenterXD = 2.0;
inline constexpr double kCylinderCenterYD = 2.0;

/// Physical and lattice parameters of one simulation.
///
/// Lattice nodes sit at cell centers: node (i, j) is at physical position
/// ((i + 0.5) / D_lu, (j + 0.5) / D_lu) in diameter units, so half-way
/// bounce-back places the channel walls exactly at y = 0 and y = H.
struct FlowConfig {
  double reynolds = 100.0;
  int diameter_lu = 20;      ///< lattice cells per cylinder diameter
  double u_max_lb = 0.1;     ///< peak inlet velocity in lattice units (Mach control)
  bool with_cylinder = true; ///< false gives a plain channel (validation runs)
  bool closed_box = false;   ///< walls on all four sides (conservation tests)
  double ramp_time_units = 2.0;  ///< inlet spin-up to avoid an impulsive start
  bool init_from_inlet_profile = false;  ///< start from the parabolic profile

  int nx() const { return static_cast<int>(std::lround(kChannelLengthD * diameter_lu)); }
  int ny() const { return static_cast<int>(std::lround(kChannelHeightD * diameter_lu)); }

  double mean_u_lb() const { return (2.0 / 3.0) * u_max_lb; }
  double viscosity_lb() const { return mean_u_lb() * diameter_lu / reynolds; }
  double tau() const { return 3.0 * viscosity_lb() + 0.5; }

  /// Lattice steps per nondimensional time unit (one unit = D / U_mean).
  double steps_per_time_unit() const { return diameter_lu / mean_u_lb(); }

  // Cylinder center in node-index coordinates.
  double cylinder_cx() const { return kCylinderCenterXD * diameter_lu - 0.5; }
  double cylinder_cy() const { return kCylinderCenterYD * diameter_lu - 0.5; }
  double radius_lu() const { return 0.5 * diameter_lu; }

  /// Throws ConfigError when the parameters are outside the operated regime.
  void validate() const;
};

/// Parabolic inlet profile 4 U_m y (H - y) / H^2 in lattice units, with y in
/// node coordinates (wall at y = -0.5, so physical height is ny cells).
/// Throws ConfigError when y lies outside the channel.
double inlet_velocity(const FlowConfig& cfg, double y_node);

}  // namespace flowrl::flow
