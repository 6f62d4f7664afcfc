#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace flowrl::neural {

/// Bias-corrected Adam over a flat parameter vector.
class Adam {
 public:
  Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);

  void step(std::span<double> params, std::span<const double> grads);

  double learning_rate() const { return lr_; }
  std::int64_t step_count() const { return t_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

  // Checkpoint restore.
  void restore(std::int64_t t, std::span<const double> m, std::span<const double> v);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace flowrl::neural
