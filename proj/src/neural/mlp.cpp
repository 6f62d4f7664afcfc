#include "flowrl/neural/mlp.hpp"

#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

namespace flowrl::neural {

Mlp::Mlp(std::vector<int> dims, std::uint64_t seed) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    w_off_.push_back(total);
    total += static_cast<std::size_t>(dims_[l + 1]) * dims_[l];
    b_off_.push_back(total);
    total += static_cast<std::size_t>(dims_[l + 1]);
  }
  params_.assign(total, 0.0);

  // Uniform fan-in initialization.
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t n = static_cast<std::size_t>(dims_[l + 1]) * dims_[l] + dims_[l + 1];
    for (std::size_t p = 0; p < n; ++p) params_[w_off_[l] + p] = dist(rng);
  }
}

void Mlp::forward(std::span<const double> x, std::span<double> y, Cache* cache) const {
  if (static_cast<int>(x.size()) != input_dim())
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  if (static_cast<int>(y.size()) != output_dim())
    throw std::invalid_argument("Mlp::forward: output size mismatch");

  if (cache) {
    cache->acts.resize(dims_.size());
    cache->acts[0].assign(x.begin(), x.end());
  }
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  const std::size_t n_layers = dims_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    next.assign(static_cast<std::size_t>(out), 0.0);
    const double* w = &params_[w_off_[l]];
    const double* b = &params_[b_off_[l]];
    const bool hidden = l + 1 < n_layers;
    for (int o = 0; o < out; ++o) {
      const double* wrow = w + static_cast<std::size_t>(o) * in;
      double acc = b[o];
#pragma omp simd reduction(+ : acc)
      for (int i = 0; i < in; ++i) acc += wrow[i] * cur[i];
      next[o] = hidden && acc < 0.0 ? 0.0 : acc;
    }
    cur.swap(next);
    if (cache) cache->acts[l + 1] = cur;
  }
  std::copy(cur.begin(), cur.end(), y.begin());
}

std::vector<double> Mlp::forward(std::span<const double> x, Cache* cache) const {
  std::vector<double> y(static_cast<std::size_t>(output_dim()));
  forward(x, y, cache);
  return y;
}

void Mlp::backward(const Cache& cache, std::span<const double> grad_out,
                   std::span<double> param_grads, std::span<double> grad_in) const {
  if (cache.acts.size() != dims_.size())
    throw std::invalid_argument("Mlp::backward: cache does not match this network");
  if (param_grads.size() != params_.size())
    throw std::invalid_argument("Mlp::backward: gradient buffer size mismatch");

  std::vector<double> delta(grad_out.begin(), grad_out.end());
  std::vector<double> prev;
  for (std::size_t l = dims_.size() - 1; l-- > 0;) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    const std::vector<double>& a_in = cache.acts[l];
    const std::vector<double>& a_out = cache.acts[l + 1];
    const bool hidden = l + 2 < dims_.size();

    // ReLU mask: units that were clipped pass no gradient.
    if (hidden) {
      for (int o = 0; o < out; ++o)
        if (a_out[o] <= 0.0) delta[o] = 0.0;
    }

    double* gw = &param_grads[w_off_[l]];
    double* gb = &param_grads[b_off_[l]];
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      gb[o] += d;
      double* gwrow = gw + static_cast<std::size_t>(o) * in;
#pragma omp simd
      for (int i = 0; i < in; ++i) gwrow[i] += d * a_in[i];
    }

    const bool need_input_grad = l > 0 || !grad_in.empty();
    if (need_input_grad) {
      prev.assign(static_cast<std::size_t>(in), 0.0);
      const double* w = &params_[w_off_[l]];
      for (int o = 0; o < out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* wrow = w + static_cast<std::size_t>(o) * in;
#pragma omp simd
        for (int i = 0; i < in; ++i) prev[i] += d * wrow[i];
      }
      delta.swap(prev);
    }
  }
  if (!grad_in.empty()) {
    if (grad_in.size() != static_cast<std::size_t>(input_dim()))
      throw std::invalid_argument("Mlp::backward: grad_in size mismatch");
    std::copy(delta.begin(), delta.end(), grad_in.begin());
  }
}

namespace {
// Batch tile size: weight rows stream once per tile while the tile's
// activations stay cache-resident.
constexpr int kBatchTile = 8;
}  // namespace

std::vector<double> Mlp::forward_batch(std::span<const double> x, int batch,
                                       BatchCache* cache) const {
  if (x.size() != static_cast<std::size_t>(batch) * input_dim())
    throw std::invalid_argument("Mlp::forward_batch: input size mismatch");
  if (cache) {
    cache->batch = batch;
    cache->acts.resize(dims_.size());
    cache->acts[0].assign(x.begin(), x.end());
  }
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  const std::size_t n_layers = dims_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    const double* w = &params_[w_off_[l]];
    const double* b = &params_[b_off_[l]];
    const bool hidden = l + 1 < n_layers;
    next.assign(static_cast<std::size_t>(batch) * out, 0.0);
    for (int b0 = 0; b0 < batch; b0 += kBatchTile) {
      const int b1 = std::min(b0 + kBatchTile, batch);
      for (int o = 0; o < out; ++o) {
        const double* wr = w + static_cast<std::size_t>(o) * in;
        for (int bi = b0; bi < b1; ++bi) {
          const double* xr = &cur[static_cast<std::size_t>(bi) * in];
          double acc = b[o];
#pragma omp simd reduction(+ : acc)
          for (int i = 0; i < in; ++i) acc += wr[i] * xr[i];
          next[static_cast<std::size_t>(bi) * out + o] =
              hidden && acc < 0.0 ? 0.0 : acc;
        }
      }
    }
    cur.swap(next);
    if (cache) cache->acts[l + 1] = cur;
  }
  return cur;
}

void Mlp::backward_batch(const BatchCache& cache, std::span<const double> grad_out,
                         std::span<double> param_grads,
                         std::vector<double>* grad_in) const {
  if (cache.acts.size() != dims_.size())
    throw std::invalid_argument("Mlp::backward_batch: cache does not match");
  if (param_grads.size() != params_.size())
    throw std::invalid_argument("Mlp::backward_batch: gradient buffer mismatch");
  const int batch = cache.batch;
  if (grad_out.size() != static_cast<std::size_t>(batch) * output_dim())
    throw std::invalid_argument("Mlp::backward_batch: grad_out size mismatch");

  std::vector<double> delta(grad_out.begin(), grad_out.end());
  std::vector<double> prev;
  for (std::size_t l = dims_.size() - 1; l-- > 0;) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    const std::vector<double>& a_in = cache.acts[l];
    const std::vector<double>& a_out = cache.acts[l + 1];
    const bool hidden = l + 2 < dims_.size();

    if (hidden) {
      for (std::size_t k = 0; k < delta.size(); ++k)
        if (a_out[k] <= 0.0) delta[k] = 0.0;
    }

    double* gw = &param_grads[w_off_[l]];
    double* gb = &param_grads[b_off_[l]];
    for (int b0 = 0; b0 < batch; b0 += kBatchTile) {
      const int b1 = std::min(b0 + kBatchTile, batch);
      for (int o = 0; o < out; ++o) {
        double* gwr = gw + static_cast<std::size_t>(o) * in;
        for (int bi = b0; bi < b1; ++bi) {
          const double d = delta[static_cast<std::size_t>(bi) * out + o];
          if (d == 0.0) continue;
          gb[o] += d;
          const double* ar = &a_in[static_cast<std::size_t>(bi) * in];
#pragma omp simd
          for (int i = 0; i < in; ++i) gwr[i] += d * ar[i];
        }
      }
    }

    const bool need_input = l > 0 || grad_in != nullptr;
    if (need_input) {
      prev.assign(static_cast<std::size_t>(batch) * in, 0.0);
      const double* w = &params_[w_off_[l]];
      for (int b0 = 0; b0 < batch; b0 += kBatchTile) {
        const int b1 = std::min(b0 + kBatchTile, batch);
        for (int o = 0; o < out; ++o) {
          const double* wr = w + static_cast<std::size_t>(o) * in;
          for (int bi = b0; bi < b1; ++bi) {
            const double d = delta[static_cast<std::size_t>(bi) * out + o];
            if (d == 0.0) continue;
            double* pr = &prev[static_cast<std::size_t>(bi) * in];
#pragma omp simd
            for (int i = 0; i < in; ++i) pr[i] += d * wr[i];
          }
        }
      }
      delta.swap(prev);
    }
  }
  if (grad_in) *grad_in = std::move(delta);
}

void polyak_update(std::span<double> target, std::span<const double> online, double tau) {
  assert(target.size() == online.size());
  for (std::size_t i = 0; i < target.size(); ++i)
    target[i] = (1.0 - tau) * target[i] + tau * online[i];
}

}  // namespace flowrl::neural
