#pragma once

#include <vector>

#include "flowrl/analysis/stats.hpp"
#include "flowrl/harness/environment.hpp"
#include "flowrl/sac/agent.hpp"

namespace flowrl::harness {

struct EvalResult {
  std::vector<flow::ForceSample> force_trace;
  std::vector<ActionRecord> action_trace;
  analysis::TraceSummary summary;  ///< over the trailing two thirds of the rollout
  double total_reward = 0.0;
  bool diverged = false;
};

/// Deterministic-policy rollout from the baseline snapshot over at least
/// `duration_tu` nondimensional time units. Divergence truncates the rollout
/// and is reported with the partial trace.
EvalResult evaluate(sac::SacAgent& agent, const EnvParams& params,
                    const flow::LatticeField& snapshot, double duration_tu);

}  // namespace flowrl::harness
