#pragma once

#include <span>

namespace flowrl::harness {

/// Sliding-window drag/lift reward: baseline mean drag minus the trailing
/// mean drag minus a weighted absolute trailing mean lift.
struct RewardConfig {
  double cd_baseline = 0.0;
  double cl_penalty_weight = 0.1;
  std::size_t window_samples = 1;  ///< one uncontrolled shedding period
};

/// Shorter traces fall back to every available sample.
double compute_reward(std::span<const double> cd_trace, std::span<const double> cl_trace,
                      const RewardConfig& cfg);

}  // namespace flowrl::harness
