#pragma once

#include <array>
#include <vector>

namespace flowrl::actuation {

/// Geometry and limits of the two synthetic jets on the cylinder surface.
///
/// Azimuth is measured clockwise from the foremost windward point, so the
/// top jet sits at 90 degrees and the bottom jet at 270 degrees.
struct JetConfig {
  double center_top_deg = 90.0;
  double center_bottom_deg = 270.0;
  double width_deg = 10.0;
  double alpha_smooth = 0.1;   ///< per-lattice-step exponential approach rate
  double max_amplitude = 1.5;  ///< peak jet velocity in units of the mean inlet speed
  double q_star_cap = 0.2;     ///< bound on the normalized jet flow rate

  void validate() const;

  /// Arc length of one jet opening in diameter units.
  double jet_width_over_d() const;
};

/// Parabolic opening profile: 1 at the arc center, 0 at the edges, 0 outside.
double arc_profile(double azimuth_deg, double center_deg, double width_deg);

/// Normalized flow rate Q* of one jet for a given signed peak velocity
/// (arc-mean speed times jet width over mean inlet flux).
double normalized_flow_rate(double v_peak, const JetConfig& cfg);

/// Boundary velocity (nondimensional, diameter-direction components) imposed
/// at a surface point. The single signed scalar drives both jets: positive
/// blows at the top arc and sucks at the bottom arc, so the pair never adds
/// net mass. Returns {0, 0} outside both arcs.
std::array<double, 2> jet_boundary_velocity(double azimuth_deg, double v_signed,
                                            const JetConfig& cfg);

/// Smoothed actuation state: the jets approach the held action exponentially,
/// one smoothing substep per lattice step.
class JetState {
 public:
  explicit JetState(JetConfig cfg = {});

  /// Clamp and hold a raw agent action; appends it to the action history.
  /// Returns the held (possibly clamped) value.
  double begin_agent_step(double raw_action);

  /// One smoothing substep toward the held action.
  void smooth_substep();

  double v() const { return v_; }              ///< signed jet scalar V_Gamma
  double v_top() const { return v_; }
  double v_bottom() const { return -v_; }
  double held_action() const { return held_action_; }
  double q_star() const { return normalized_flow_rate(v_, cfg_); }

  /// True when the most recent begin_agent_step had to clamp its input.
  bool last_action_clamped() const { return last_clamped_; }

  const std::vector<double>& action_history() const { return history_; }
  const JetConfig& config() const { return cfg_; }

  void reset();

 private:
  JetConfig cfg_;
  double v_ = 0.0;
  double held_action_ = 0.0;
  bool last_clamped_ = false;
  std::vector<double> history_;
};

}  // namespace flowrl::actuation
