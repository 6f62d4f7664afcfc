#include "flowrl/feature/lifted_state.hpp"

#include <algorithm>

#include "flowrl/errors.hpp"

namespace flowrl::feature {

void LiftConfig::validate() const {
  if (rows < 1) throw ConfigError("lift config: rows must be at least 1");
}

LiftedState lift(std::span<const std::vector<double>> sensor_history,
                 std::span<const double> action_history, const LiftConfig& cfg,
                 int sensor_channels) {
  cfg.validate();
  LiftedState state;
  state.rows = cfg.rows;
  state.cols = sensor_channels + 1;
  state.values.assign(static_cast<std::size_t>(state.rows) * state.cols, 0.0);
  if (sensor_history.empty()) return state;

  const int have = static_cast<int>(sensor_history.size());
  for (int r = 0; r < state.rows; ++r) {
    // Row r holds the sample lagging (rows - 1 - r) steps behind the newest;
    // lags beyond the recorded history clamp to the first available row.
    const int lag = state.rows - 1 - r;
    const int s_idx = std::max(have - 1 - lag, 0);
    const std::vector<double>& sensors = sensor_history[s_idx];
    if (static_cast<int>(sensors.size()) != sensor_channels)
      throw ConfigError("lift: sensor row width mismatch");
    double* row = &state.values[static_cast<std::size_t>(r) * state.cols];
    for (int c = 0; c < sensor_channels; ++c) row[c] = cfg.alpha_scale * sensors[c];
    // The action paired with sensor sample k is the one held during the step
    // that produced it, i.e. action index k-1.
    const int a_idx = s_idx - 1;
    if (a_idx >= 0 && a_idx < static_cast<int>(action_history.size()))
      row[sensor_channels] = cfg.beta_scale * action_history[a_idx];
  }
  return state;
}

std::vector<double> flatten(const LiftedState& state) { return state.values; }

}  // namespace flowrl::feature
