#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace flowrl::neural {

/// Dense network with ReLU hidden layers and a linear output layer.
/// Parameters live in one flat array ([W0][b0][W1][b1]...; W row-major,
/// out x in) so optimizers, target averaging and checkpoints can treat the
/// network as a single vector.
class Mlp {
 public:
  Mlp(std::vector<int> dims, std::uint64_t seed);

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  /// Post-activation values per layer for one forward pass; acts[0] is the
  /// input, acts.back() the output.
  struct Cache {
    std::vector<std::vector<double>> acts;
  };

  void forward(std::span<const double> x, std::span<double> y, Cache* cache = nullptr) const;
  std::vector<double> forward(std::span<const double> x, Cache* cache = nullptr) const;

  /// Accumulates exact parameter gradients of (output . grad_out) into
  /// `param_grads` (same layout as params). When `grad_in` is non-empty the
  /// gradient with respect to the input is written there.
  void backward(const Cache& cache, std::span<const double> grad_out,
                std::span<double> param_grads, std::span<double> grad_in = {}) const;

  /// Batched variants (row-major batch x dim matrices). These share weights
  /// across the batch, which is substantially faster than per-sample calls.
  struct BatchCache {
    int batch = 0;
    std::vector<std::vector<double>> acts;  // acts[l]: batch x dims[l]
  };

  std::vector<double> forward_batch(std::span<const double> x, int batch,
                                    BatchCache* cache = nullptr) const;
  void backward_batch(const BatchCache& cache, std::span<const double> grad_out,
                      std::span<double> param_grads,
                      std::vector<double>* grad_in = nullptr) const;

 private:
  std::vector<int> dims_;
  std::vector<double> params_;
  std::vector<std::size_t> w_off_, b_off_;  // per-layer offsets into params_
};

/// x <- (1 - tau) x + tau y, elementwise (target-network tracking).
void polyak_update(std::span<double> target, std::span<const double> online, double tau);

}  // namespace flowrl::neural
