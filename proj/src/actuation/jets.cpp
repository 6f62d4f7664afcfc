#include "flowrl/actuation/jets.hpp"

#include <algorithm>
#include <cmath>

#include "flowrl/errors.hpp"

namespace flowrl::actuation {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_deg(double a) {
  double r = std::fmod(a, 360.0);
  if (r < 0.0) r += 360.0;
  return r;
}

// Shortest signed angular distance a - b in degrees.
double ang_dist_deg(double a, double b) {
  double d = wrap_deg(a) - wrap_deg(b);
  if (d > 180.0) d -= 360.0;
  if (d < -180.0) d += 360.0;
  return d;
}
}  // namespace

void JetConfig::validate() const {
  if (width_deg <= 0.0 || width_deg >= 180.0)
    throw ConfigError("jet config: width_deg must lie in (0, 180)");
  if (alpha_smooth <= 0.0 || alpha_smooth > 1.0)
    throw ConfigError("jet config: alpha_smooth must lie in (0, 1]");
  if (max_amplitude <= 0.0) throw ConfigError("jet config: max_amplitude must be positive");
  if (q_star_cap <= 0.0) throw ConfigError("jet config: q_star_cap must be positive");
  if (std::abs(ang_dist_deg(center_top_deg, center_bottom_deg)) < width_deg)
    throw ConfigError("jet config: jet arcs overlap");
}

double JetConfig::jet_width_over_d() const { return kPi * width_deg / 360.0; }

double arc_profile(double azimuth_deg, double center_deg, double width_deg) {
  const double half = 0.5 * width_deg;
  const double d = ang_dist_deg(azimuth_deg, center_deg);
  if (std::abs(d) >= half) return 0.0;
  const double x = d / half;
  return 1.0 - x * x;
}

double normalized_flow_rate(double v_peak, const JetConfig& cfg) {
  // Arc-mean speed of a parabolic profile is 2/3 of the peak.
  return (2.0 / 3.0) * v_peak * cfg.jet_width_over_d();
}

std::array<double, 2> jet_boundary_velocity(double azimuth_deg, double v_signed,
                                            const JetConfig& cfg) {
  double magnitude = 0.0;
  const double top = arc_profile(azimuth_deg, cfg.center_top_deg, cfg.width_deg);
  if (top > 0.0) {
    magnitude = v_signed * top;
  } else {
    const double bottom = arc_profile(azimuth_deg, cfg.center_bottom_deg, cfg.width_deg);
    if (bottom > 0.0) magnitude = -v_signed * bottom;
  }
  if (magnitude == 0.0) return {0.0, 0.0};
  // Radially outward direction at this azimuth (clockwise from windward point).
  const double rad = azimuth_deg * kPi / 180.0;
  return {-std::cos(rad) * magnitude, std::sin(rad) * magnitude};
}

JetState::JetState(JetConfig cfg) : cfg_(cfg) { cfg_.validate(); }

double JetState::begin_agent_step(double raw_action) {
  double a = raw_action;
  last_clamped_ = false;
  // Amplitude and flow-rate clamps are both magnitude caps, so their order
  // does not matter.
  if (std::abs(a) > cfg_.max_amplitude) {
    a = std::copysign(cfg_.max_amplitude, a);
    last_clamped_ = true;
  }
  const double q = normalized_flow_rate(a, cfg_);
  if (std::abs(q) > cfg_.q_star_cap) {
    a = std::copysign(cfg_.q_star_cap / ((2.0 / 3.0) * cfg_.jet_width_over_d()), a);
    last_clamped_ = true;
  }
  held_action_ = a;
  history_.push_back(raw_action);
  return a;
}

void JetState::smooth_substep() {
  v_ += cfg_.alpha_smooth * (held_action_ - v_);
}

void JetState::reset() {
  v_ = 0.0;
  held_action_ = 0.0;
  last_clamped_ = false;
  history_.clear();
}

}  // namespace flowrl::actuation
