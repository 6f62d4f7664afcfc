#include "flowrl/harness/reward.hpp"

#include <algorithm>
#include <cmath>

#include "flowrl/errors.hpp"

namespace flowrl::harness {

double compute_reward(std::span<const double> cd_trace, std::span<const double> cl_trace,
                      const RewardConfig& cfg) {
  if (cd_trace.empty() || cd_trace.size() != cl_trace.size())
    throw ConfigError("compute_reward: traces must be nonempty and aligned");
  const std::size_t n = std::min(cfg.window_samples == 0 ? std::size_t{1} : cfg.window_samples,
                                 cd_trace.size());
  double cd_sum = 0.0, cl_sum = 0.0;
  for (std::size_t k = cd_trace.size() - n; k < cd_trace.size(); ++k) {
    cd_sum += cd_trace[k];
    cl_sum += cl_trace[k];
  }
  const double cd_mean = cd_sum / static_cast<double>(n);
  const double cl_mean = cl_sum / static_cast<double>(n);
  return cfg.cd_baseline - cd_mean - cfg.cl_penalty_weight * std::abs(cl_mean);
}

}  // namespace flowrl::harness
