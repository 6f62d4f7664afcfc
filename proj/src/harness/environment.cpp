#include "flowrl/harness/environment.hpp"

#include <cmath>
#include <stdexcept>

#include "flowrl/errors.hpp"
#include "flowrl/sensing/standardize.hpp"

namespace flowrl::harness {

CylinderEnv::CylinderEnv(const EnvParams& params, const flow::LatticeField& snapshot)
    : params_(params),
      baseline_(snapshot),
      field_(snapshot),
      jets_(params.jets) {
  params_.lift.validate();
  if (params_.steps_per_episode < 1)
    throw ConfigError("environment: steps_per_episode must be positive");
  if (params_.agent_step_duration_tu <= 0.0)
    throw ConfigError("environment: agent_step_duration must be positive");
  sensing::validate_layout(params_.layout, field_);

  const double steps_per_tu = params_.flow.steps_per_time_unit();
  hold_steps_ = std::max(1L, std::lround(params_.agent_step_duration_tu * steps_per_tu));
  reward_window_samples_ =
      std::max(1L, std::lround(params_.reward_window_tu * steps_per_tu));
  raw_sensor_series_.resize(params_.layout.channels());
}

feature::LiftedState CylinderEnv::reset() {
  field_ = baseline_;
  jets_.reset();
  agent_steps_ = 0;
  terminal_ = truncated_ = false;
  for (auto& series : raw_sensor_series_) series.clear();
  std_rows_.clear();
  force_trace_.clear();
  action_trace_.clear();
  cd_samples_.clear();
  cl_samples_.clear();
  sample_sensors();
  return current_state();
}

void CylinderEnv::sample_sensors() {
  const sensing::SensorReading reading = sensing::read_sensors(field_, params_.layout);
  std::vector<double> row(reading.values.size());
  for (std::size_t c = 0; c < reading.values.size(); ++c) {
    raw_sensor_series_[c].push_back(reading.values[c]);
    row[c] = sensing::standardize_last(raw_sensor_series_[c], params_.standardize_window);
  }
  std_rows_.push_back(std::move(row));
}

feature::LiftedState CylinderEnv::current_state() const {
  return feature::lift(std_rows_, jets_.action_history(), params_.lift,
                       params_.layout.channels());
}

CylinderEnv::StepOutcome CylinderEnv::step(double raw_action) {
  if (episode_over())
    throw std::logic_error("CylinderEnv::step called on a finished episode");

  StepOutcome out;
  out.held_action = jets_.begin_agent_step(raw_action);

  for (int k = 0; k < hold_steps_; ++k) {
    jets_.smooth_substep();
    try {
      field_.step(jets_);
    } catch (const DivergenceError&) {
      terminal_ = true;
      break;
    }
    const flow::ForceSample fs = field_.forces();
    force_trace_.push_back(fs);
    cd_samples_.push_back(fs.cd);
    cl_samples_.push_back(fs.cl);
  }
  ++agent_steps_;

  action_trace_.push_back(ActionRecord{agent_steps_, raw_action, jets_.v_top(),
                                       jets_.v_bottom(), jets_.q_star()});

  if (terminal_) {
    out.reward = params_.divergence_penalty;
    out.terminal = true;
    out.state = current_state();
    return out;
  }

  sample_sensors();
  out.state = current_state();

  const RewardConfig reward_cfg{params_.cd_baseline, params_.cl_penalty_weight,
                                reward_window_samples_};
  out.reward = compute_reward(cd_samples_, cl_samples_, reward_cfg);

  if (agent_steps_ >= params_.steps_per_episode) {
    truncated_ = true;
    out.truncated = true;
  }
  return out;
}

}  // namespace flowrl::harness
