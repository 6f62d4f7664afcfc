#pragma once

#include <span>
#include <vector>

namespace flowrl::feature {

/// Shape and scaling of the time-history feature state.
struct LiftConfig {
  int rows = 30;             ///< backtracked agent steps (1 = plain sensor feedback)
  double alpha_scale = 1.0;  ///< sensor-column scaling
  double beta_scale = 1.0;   ///< action-column scaling (0 = drop action feedback)

  void validate() const;
};

/// The (rows x channels) feature matrix fed to the agent, oldest row first.
/// Columns are the sensor channels followed by the action channel.
struct LiftedState {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  ///< row-major, rows * cols

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

/// Assembles the lifted state from the standardized sensor history (one entry
/// per agent step, newest last) and the raw action history, which lags the
/// sensors by one step. Episodes shorter than `rows` repeat their first
/// available row; an empty history gives the all-zero state.
LiftedState lift(std::span<const std::vector<double>> sensor_history,
                 std::span<const double> action_history, const LiftConfig& cfg,
                 int sensor_channels);

/// Row-major flattening (the network input adapter).
std::vector<double> flatten(const LiftedState& state);

}  // namespace flowrl::feature
