#pragma once

#include <vector>

#include "flowrl/actuation/jets.hpp"
#include "flowrl/feature/lifted_state.hpp"
#include "flowrl/flow/forces.hpp"
#include "flowrl/flow/lattice.hpp"
#include "flowrl/harness/reward.hpp"
#include "flowrl/sensing/layout.hpp"

namespace flowrl::harness {

/// Everything one environment worker needs, resolved against baseline stats.
struct EnvParams {
  flow::FlowConfig flow;
  actuation::JetConfig jets;
  sensing::SensorLayout layout = sensing::SensorLayout::single_surface(150.0);
  feature::LiftConfig lift;
  int steps_per_episode = 100;
  double agent_step_duration_tu = 0.25;  ///< 7.5% of the uncontrolled shedding period
  double reward_window_tu = 3.3;         ///< one uncontrolled shedding period
  double cd_baseline = 0.0;
  double cl_penalty_weight = 0.1;
  double divergence_penalty = -10.0;
  int standardize_window = 30;
};

/// Per-agent-step actuation telemetry.
struct ActionRecord {
  int step = 0;
  double a_raw = 0.0;
  double v_top = 0.0;
  double v_bottom = 0.0;
  double q_star = 0.0;
};

/// One cylinder-flow episode worker: advances the solver one action hold at a
/// time, smooths the jets every lattice step, samples sensors at the end of
/// each hold and assembles the lifted feature state.
class CylinderEnv {
 public:
  CylinderEnv(const EnvParams& params, const flow::LatticeField& snapshot);

  /// Restores the baseline snapshot and clears all histories.
  /// Returns the initial lifted state (first sensor reading, zero actions).
  feature::LiftedState reset();

  struct StepOutcome {
    feature::LiftedState state;
    double reward = 0.0;
    bool terminal = false;   ///< true termination (solver divergence)
    bool truncated = false;  ///< episode step limit reached
    double held_action = 0.0;
  };

  StepOutcome step(double raw_action);

  bool episode_over() const { return terminal_ || truncated_; }
  int agent_steps_taken() const { return agent_steps_; }
  int hold_steps() const { return hold_steps_; }
  int sensor_channels() const { return params_.layout.channels(); }
  int state_dim() const { return params_.lift.rows * (sensor_channels() + 1); }

  const std::vector<flow::ForceSample>& force_trace() const { return force_trace_; }
  const std::vector<ActionRecord>& action_trace() const { return action_trace_; }
  const flow::LatticeField& field() const { return field_; }
  const EnvParams& params() const { return params_; }

 private:
  feature::LiftedState current_state() const;
  void sample_sensors();

  EnvParams params_;
  flow::LatticeField baseline_;
  flow::LatticeField field_;
  actuation::JetState jets_;
  int hold_steps_ = 0;
  std::size_t reward_window_samples_ = 1;
  int agent_steps_ = 0;
  bool terminal_ = false;
  bool truncated_ = false;

  std::vector<std::vector<double>> raw_sensor_series_;  // channel-major
  std::vector<std::vector<double>> std_rows_;           // per agent step
  std::vector<flow::ForceSample> force_trace_;
  std::vector<ActionRecord> action_trace_;
  std::vector<double> cd_samples_, cl_samples_;
};

}  // namespace flowrl::harness
