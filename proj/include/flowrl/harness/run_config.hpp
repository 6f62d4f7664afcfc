#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowrl/actuation/jets.hpp"
#include "flowrl/feature/lifted_state.hpp"
#include "flowrl/flow/config.hpp"
#include "flowrl/sac/agent.hpp"

namespace flowrl::harness {

struct TrainingConfig {
  std::string name = "run";
  int episodes = 300;   ///< total completed episodes across all environments
  int n_envs = 5;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int steps_per_episode = 100;
  double agent_step_fraction = 0.075;  ///< of the uncontrolled shedding period
  double cl_penalty_weight = 0.1;
  double divergence_penalty = -10.0;
  int standardize_window = 30;
  int checkpoint_every = 50;  ///< episodes between checkpoints
  int trace_every = 25;       ///< episodes between per-step trace dumps
  double baseline_max_time_units = 500.0;
  double eval_time_units = 120.0;
};

/// Complete description of one run; every field can be set from the config
/// file and everything else derives from it plus measured baseline statistics.
struct RunParams {
  flow::FlowConfig flow;
  actuation::JetConfig jets;
  std::string layout_spec = "L3:150";
  feature::LiftConfig lift;
  sac::SacConfig sac;
  TrainingConfig training;
};

/// Parses the sectioned run-config format ([flow], [jets], [sensors],
/// [agent], [training]; `key = value` lines; '#' or ';' comments). Unknown
/// sections or keys are rejected.
RunParams parse_run_config_text(const std::string& text);
RunParams load_run_config(const std::string& path);

/// Canonical round-trip serialization (used for config.lock files).
std::string serialize_run_config(const RunParams& params);

/// FNV-1a hash of the canonical serialization.
std::uint64_t config_hash(const RunParams& params);

}  // namespace flowrl::harness
