#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "flowrl/neural/adam.hpp"
#include "flowrl/neural/mlp.hpp"
#include "flowrl/sac/replay_buffer.hpp"

namespace flowrl::sac {

struct SacConfig {
  double gamma = 0.97;          ///< discount factor
  double alpha_temp = 0.2;      ///< fixed entropy temperature
  double actor_lr = 3e-4;
  double critic_lr = 2e-4;
  double tau_target = 0.005;    ///< Polyak smoothing toward the targets
  int batch_size = 64;
  int update_every = 50;        ///< agent steps between update rounds
  int gradient_steps = 50;      ///< gradient steps per update round
  std::uint64_t buffer_capacity = 1'000'000;
  int hidden = 512;             ///< width of both fully connected layers
  double action_scale = 1.5;    ///< actuator bound fed to the tanh squash

  void validate() const;
};

/// Soft Actor-Critic with twin critics, Polyak-averaged targets and a fixed
/// temperature. Scalar action; the actor head emits (mean, log_std).
class SacAgent {
 public:
  SacAgent(int state_dim, const SacConfig& cfg, std::uint64_t seed);

  enum class Mode { kStochastic, kDeterministic };

  double select_action(std::span<const double> state, Mode mode);

  struct Losses {
    double critic1 = 0.0;
    double critic2 = 0.0;
    double actor = 0.0;
    double entropy = 0.0;  ///< Monte-Carlo policy entropy over the batch
  };

  /// One gradient step on a sampled batch: critics regress to the entropy-
  /// regularized Polyak-target value, the actor ascends the reparameterized
  /// objective, targets track the critics.
  Losses update(std::span<const Transition* const> batch);

  /// -E[log pi] over fresh action samples at the given states.
  double entropy_estimate(std::span<const std::vector<double>> states,
                          int samples_per_state = 8);

  int state_dim() const { return state_dim_; }
  const SacConfig& config() const { return cfg_; }
  const neural::Mlp& actor() const { return actor_; }
  neural::Mlp& mutable_actor() { return actor_; }
  const neural::Mlp& critic1() const { return critic1_; }
  const neural::Mlp& critic2() const { return critic2_; }
  const neural::Mlp& target1() const { return target1_; }
  const neural::Mlp& target2() const { return target2_; }

  void save(const std::string& path, const ReplayBuffer* buffer = nullptr) const;
  static SacAgent load(const std::string& path, ReplayBuffer* buffer = nullptr);

 private:
  double critic_value(const neural::Mlp& critic, std::span<const double> state,
                      double action, neural::Mlp::Cache* cache = nullptr) const;

  SacConfig cfg_;
  int state_dim_;
  neural::Mlp actor_, critic1_, critic2_, target1_, target2_;
  neural::Adam opt_actor_, opt_critic1_, opt_critic2_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace flowrl::sac
