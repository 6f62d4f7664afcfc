#pragma once

#include <span>
#include <vector>

namespace flowrl::neural {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

/// Sample from a tanh-squashed Gaussian policy head, scaled to the actuator
/// range. The mapping is a = scale * tanh(mean + std * noise), reparameterized
/// so gradients flow through the noise path; log_prob carries the
/// change-of-variables correction.
struct SquashedSample {
  std::vector<double> action;
  std::vector<double> pre_tanh;  ///< mean + std * noise, needed for gradients
  double log_prob = 0.0;
};

SquashedSample gaussian_head_sample(std::span<const double> mean,
                                    std::span<const double> log_std,
                                    std::span<const double> noise, double scale);

/// Log density of a given in-bounds action under the squashed Gaussian.
double gaussian_head_log_prob(std::span<const double> mean,
                              std::span<const double> log_std,
                              std::span<const double> action, double scale);

/// Deterministic head output: scale * tanh(mean).
std::vector<double> squashed_mean_action(std::span<const double> mean, double scale);

double clamp_log_std(double log_std);

}  // namespace flowrl::neural
