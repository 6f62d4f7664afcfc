#include "flowrl/neural/gaussian_head.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowrl::neural {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)
constexpr double kLog2 = 0.6931471805599453;

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

// log(1 - tanh(u)^2), stable for large |u|.
double log_one_minus_tanh_sq(double u) { return 2.0 * (kLog2 - u - softplus(-2.0 * u)); }
}  // namespace

double clamp_log_std(double log_std) {
  return std::clamp(log_std, kLogStdMin, kLogStdMax);
}

SquashedSample gaussian_head_sample(std::span<const double> mean,
                                    std::span<const double> log_std,
                                    std::span<const double> noise, double scale) {
  if (mean.size() != log_std.size() || mean.size() != noise.size())
    throw std::invalid_argument("gaussian_head_sample: size mismatch");
  SquashedSample out;
  out.action.resize(mean.size());
  out.pre_tanh.resize(mean.size());
  double lp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double ls = clamp_log_std(log_std[i]);
    const double sd = std::exp(ls);
    const double u = mean[i] + sd * noise[i];
    out.pre_tanh[i] = u;
    out.action[i] = scale * std::tanh(u);
    // Gaussian density at u plus the tanh-and-scale change of variables.
    lp += -0.5 * noise[i] * noise[i] - ls - 0.5 * kLog2Pi;
    lp -= std::log(scale) + log_one_minus_tanh_sq(u);
  }
  out.log_prob = lp;
  return out;
}

double gaussian_head_log_prob(std::span<const double> mean,
                              std::span<const double> log_std,
                              std::span<const double> action, double scale) {
  if (mean.size() != log_std.size() || mean.size() != action.size())
    throw std::invalid_argument("gaussian_head_log_prob: size mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double ls = clamp_log_std(log_std[i]);
    const double sd = std::exp(ls);
    double t = action[i] / scale;
    t = std::clamp(t, -1.0 + 1e-12, 1.0 - 1e-12);
    const double u = std::atanh(t);
    const double z = (u - mean[i]) / sd;
    lp += -0.5 * z * z - ls - 0.5 * kLog2Pi;
    lp -= std::log(scale) + log_one_minus_tanh_sq(u);
  }
  return lp;
}

std::vector<double> squashed_mean_action(std::span<const double> mean, double scale) {
  std::vector<double> out(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) out[i] = scale * std::tanh(mean[i]);
  return out;
}

}  // namespace flowrl::neural
