#include "flowrl/sac/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flowrl/io/binary.hpp"
#include "flowrl/neural/checkpoint.hpp"
#include "flowrl/neural/gaussian_head.hpp"

namespace flowrl::sac {

namespace {
constexpr char kMagic[8] = {'F', 'L', 'O', 'W', 'A', 'G', 'T', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr double kLog2Pi = 1.8378770664093453;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 round to decorrelate the per-network init streams.
  std::uint64_t z = seed + salt * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

void SacConfig::validate() const {
  std::ostringstream err;
  if (gamma <= 0.0 || gamma >= 1.0)
    err << "gamma must lie in (0, 1), got " << gamma;
  else if (alpha_temp < 0.0)
    err << "alpha_temp must be nonnegative";
  else if (actor_lr <= 0.0 || critic_lr <= 0.0)
    err << "learning rates must be positive";
  else if (tau_target <= 0.0 || tau_target > 1.0)
    err << "tau_target must lie in (0, 1]";
  else if (batch_size < 1)
    err << "batch_size must be positive";
  else if (update_every < 1)
    err << "update cadence must be at least 1";
  else if (gradient_steps < 1)
    err << "gradient_steps must be at least 1";
  else if (hidden < 1)
    err << "hidden width must be positive";
  else if (action_scale <= 0.0)
    err << "action_scale must be positive";
  const std::string msg = err.str();
  if (!msg.empty()) throw ConfigError("sac config: " + msg);
}

SacAgent::SacAgent(int state_dim, const SacConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      state_dim_(state_dim),
      actor_({state_dim, cfg.hidden, cfg.hidden, 2}, mix_seed(seed, 1)),
      critic1_({state_dim + 1, cfg.hidden, cfg.hidden, 1}, mix_seed(seed, 2)),
      critic2_({state_dim + 1, cfg.hidden, cfg.hidden, 1}, mix_seed(seed, 3)),
      target1_(critic1_),
      target2_(critic2_),
      opt_actor_(actor_.param_count(), cfg.actor_lr),
      opt_critic1_(critic1_.param_count(), cfg.critic_lr),
      opt_critic2_(critic2_.param_count(), cfg.critic_lr),
      rng_(mix_seed(seed, 4)) {
  cfg_.validate();
  if (state_dim_ < 1) throw ConfigError("sac agent: state_dim must be positive");
}

double SacAgent::critic_value(const neural::Mlp& critic, std::span<const double> state,
                              double action, neural::Mlp::Cache* cache) const {
  std::vector<double> input(state.begin(), state.end());
  input.push_back(action);
  return critic.forward(input, cache)[0];
}

double SacAgent::select_action(std::span<const double> state, Mode mode) {
  const std::vector<double> head = actor_.forward(state);
  if (mode == Mode::kDeterministic) {
    return cfg_.action_scale * std::tanh(head[0]);
  }
  const double noise = normal_(rng_);
  const auto sample = neural::gaussian_head_sample(
      std::span(&head[0], 1), std::span(&head[1], 1), std::span(&noise, 1),
      cfg_.action_scale);
  return sample.action[0];
}

SacAgent::Losses SacAgent::update(std::span<const Transition* const> batch) {
  if (batch.empty()) throw ConfigError("sac update: empty batch");
  const int b_count = static_cast<int>(batch.size());
  const double inv_b = 1.0 / b_count;
  const double alpha = cfg_.alpha_temp;
  const double scale = cfg_.action_scale;
  const std::size_t sd = static_cast<std::size_t>(state_dim_);
  Losses losses;

  // Critic regression targets from the Polyak targets and a fresh next action.
  std::vector<double> x_next(batch.size() * sd);
  for (std::size_t b = 0; b < batch.size(); ++b)
    std::copy(batch[b]->next_state.begin(), batch[b]->next_state.end(),
              x_next.begin() + b * sd);
  const std::vector<double> heads_next = actor_.forward_batch(x_next, b_count);

  std::vector<double> critic_in(batch.size() * (sd + 1));
  auto fill_critic_in = [&](std::size_t b, const std::vector<double>& state, double a) {
    double* row = &critic_in[b * (sd + 1)];
    std::copy(state.begin(), state.end(), row);
    row[sd] = a;
  };

  std::vector<double> logp_next(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double mean = heads_next[2 * b];
    const double ls = neural::clamp_log_std(heads_next[2 * b + 1]);
    const double sdv = std::exp(ls);
    const double noise = normal_(rng_);
    const double u = mean + sdv * noise;
    const double t = std::tanh(u);
    logp_next[b] = -0.5 * noise * noise - ls - 0.5 * kLog2Pi - std::log(scale) -
                   std::log(std::max(1.0 - t * t, 1e-300));
    fill_critic_in(b, batch[b]->next_state, scale * t);
  }
  const std::vector<double> q1_next = target1_.forward_batch(critic_in, b_count);
  const std::vector<double> q2_next = target2_.forward_batch(critic_in, b_count);

  std::vector<double> y(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double soft_q = std::min(q1_next[b], q2_next[b]) - alpha * logp_next[b];
    y[b] = batch[b]->reward +
           cfg_.gamma * (batch[b]->done ? 0.0 : 1.0) * soft_q;
  }

  // Critics regress to y.
  for (std::size_t b = 0; b < batch.size(); ++b)
    fill_critic_in(b, batch[b]->state, batch[b]->action);
  std::vector<double> grads;
  std::vector<double> g_out(batch.size());
  neural::Mlp::BatchCache cache;
  auto update_critic = [&](neural::Mlp& critic, neural::Adam& opt) {
    const std::vector<double> q = critic.forward_batch(critic_in, b_count, &cache);
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const double diff = q[b] - y[b];
      loss += diff * diff;
      g_out[b] = 2.0 * diff * inv_b;
    }
    grads.assign(critic.param_count(), 0.0);
    critic.backward_batch(cache, g_out, grads);
    opt.step(critic.params(), grads);
    return loss * inv_b;
  };
  losses.critic1 = update_critic(critic1_, opt_critic1_);
  losses.critic2 = update_critic(critic2_, opt_critic2_);

  // Actor ascent on E[min Q(s, a~) - alpha log pi(a~|s)], reparameterized.
  std::vector<double> x_state(batch.size() * sd);
  for (std::size_t b = 0; b < batch.size(); ++b)
    std::copy(batch[b]->state.begin(), batch[b]->state.end(), x_state.begin() + b * sd);
  neural::Mlp::BatchCache cache_actor;
  const std::vector<double> heads =
      actor_.forward_batch(x_state, b_count, &cache_actor);

  std::vector<double> noise_v(batch.size()), tanh_v(batch.size()), sd_v(batch.size());
  std::vector<bool> clamped_v(batch.size());
  double actor_loss = 0.0, entropy_acc = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double mean = heads[2 * b];
    const double raw_ls = heads[2 * b + 1];
    clamped_v[b] = raw_ls < neural::kLogStdMin || raw_ls > neural::kLogStdMax;
    const double ls = neural::clamp_log_std(raw_ls);
    sd_v[b] = std::exp(ls);
    noise_v[b] = normal_(rng_);
    const double u = mean + sd_v[b] * noise_v[b];
    tanh_v[b] = std::tanh(u);
    const double logp = -0.5 * noise_v[b] * noise_v[b] - ls - 0.5 * kLog2Pi -
                        std::log(scale) -
                        std::log(std::max(1.0 - tanh_v[b] * tanh_v[b], 1e-300));
    entropy_acc += -logp;
    actor_loss += alpha * logp;
    fill_critic_in(b, batch[b]->state, scale * tanh_v[b]);
  }

  neural::Mlp::BatchCache cq1, cq2;
  const std::vector<double> q1 = critic1_.forward_batch(critic_in, b_count, &cq1);
  const std::vector<double> q2 = critic2_.forward_batch(critic_in, b_count, &cq2);
  std::vector<double> mask1(batch.size()), mask2(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const bool first = q1[b] <= q2[b];
    mask1[b] = first ? 1.0 : 0.0;
    mask2[b] = first ? 0.0 : 1.0;
    actor_loss -= std::min(q1[b], q2[b]);
  }
  // Gradients of the per-sample min critic with respect to its action input;
  // the parameter gradients of this pass are discarded.
  std::vector<double> scratch(critic1_.param_count(), 0.0);
  std::vector<double> grad_in1, grad_in2;
  critic1_.backward_batch(cq1, mask1, scratch, &grad_in1);
  scratch.assign(critic2_.param_count(), 0.0);
  critic2_.backward_batch(cq2, mask2, scratch, &grad_in2);

  std::vector<double> head_grads(batch.size() * 2);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double dq_da =
        mask1[b] != 0.0 ? grad_in1[b * (sd + 1) + sd] : grad_in2[b * (sd + 1) + sd];
    const double t = tanh_v[b];
    const double da_du = scale * (1.0 - t * t);
    head_grads[2 * b] = (alpha * 2.0 * t - dq_da * da_du) * inv_b;
    head_grads[2 * b + 1] =
        clamped_v[b] ? 0.0
                     : (alpha * (-1.0 + 2.0 * t * sd_v[b] * noise_v[b]) -
                        dq_da * da_du * sd_v[b] * noise_v[b]) *
                           inv_b;
  }
  std::vector<double> actor_grads(actor_.param_count(), 0.0);
  actor_.backward_batch(cache_actor, head_grads, actor_grads);
  opt_actor_.step(actor_.params(), actor_grads);
  losses.actor = actor_loss * inv_b;
  losses.entropy = entropy_acc * inv_b;

  neural::polyak_update(target1_.params(), critic1_.params(), cfg_.tau_target);
  neural::polyak_update(target2_.params(), critic2_.params(), cfg_.tau_target);
  return losses;
}

double SacAgent::entropy_estimate(std::span<const std::vector<double>> states,
                                  int samples_per_state) {
  if (states.empty()) throw ConfigError("entropy_estimate: empty state batch");
  double acc = 0.0;
  long count = 0;
  for (const std::vector<double>& s : states) {
    const std::vector<double> head = actor_.forward(s);
    for (int k = 0; k < samples_per_state; ++k) {
      const double noise = normal_(rng_);
      const auto sample = neural::gaussian_head_sample(
          std::span(&head[0], 1), std::span(&head[1], 1), std::span(&noise, 1),
          cfg_.action_scale);
      acc += -sample.log_prob;
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

void SacAgent::save(const std::string& path, const ReplayBuffer* buffer) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("agent checkpoint: cannot write " + path);
  io::write_raw(out, kMagic, sizeof(kMagic));
  io::write_pod(out, kVersion);
  io::write_pod(out, cfg_.gamma);
  io::write_pod(out, cfg_.alpha_temp);
  io::write_pod(out, cfg_.actor_lr);
  io::write_pod(out, cfg_.critic_lr);
  io::write_pod(out, cfg_.tau_target);
  io::write_pod<std::int32_t>(out, cfg_.batch_size);
  io::write_pod<std::int32_t>(out, cfg_.update_every);
  io::write_pod<std::int32_t>(out, cfg_.gradient_steps);
  io::write_pod<std::uint64_t>(out, cfg_.buffer_capacity);
  io::write_pod<std::int32_t>(out, cfg_.hidden);
  io::write_pod(out, cfg_.action_scale);
  io::write_pod<std::int32_t>(out, state_dim_);
  neural::write_mlp_block(out, actor_);
  neural::write_mlp_block(out, critic1_);
  neural::write_mlp_block(out, critic2_);
  neural::write_mlp_block(out, target1_);
  neural::write_mlp_block(out, target2_);
  neural::write_adam_block(out, opt_actor_);
  neural::write_adam_block(out, opt_critic1_);
  neural::write_adam_block(out, opt_critic2_);
  std::ostringstream rng_text;
  rng_text << rng_ << ' ' << normal_;
  io::write_string(out, rng_text.str());
  io::write_pod<std::uint64_t>(out, buffer ? buffer->size() : 0);
  io::write_pod<std::uint64_t>(out, buffer ? buffer->total_insertions() : 0);
  io::write_pod<std::uint8_t>(out, buffer ? 1 : 0);
  if (buffer) buffer->write_contents(out);
  if (!out) throw ConfigError("agent checkpoint: write failed for " + path);
}

SacAgent SacAgent::load(const std::string& path, ReplayBuffer* buffer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("agent checkpoint: cannot open " + path);
  io::expect_magic(in, kMagic, sizeof(kMagic), "agent checkpoint");
  if (io::read_pod<std::uint32_t>(in) != kVersion)
    throw ConfigError("agent checkpoint: unsupported version");
  SacConfig cfg;
  cfg.gamma = io::read_pod<double>(in);
  cfg.alpha_temp = io::read_pod<double>(in);
  cfg.actor_lr = io::read_pod<double>(in);
  cfg.critic_lr = io::read_pod<double>(in);
  cfg.tau_target = io::read_pod<double>(in);
  cfg.batch_size = io::read_pod<std::int32_t>(in);
  cfg.update_every = io::read_pod<std::int32_t>(in);
  cfg.gradient_steps = io::read_pod<std::int32_t>(in);
  cfg.buffer_capacity = io::read_pod<std::uint64_t>(in);
  cfg.hidden = io::read_pod<std::int32_t>(in);
  cfg.action_scale = io::read_pod<double>(in);
  const int state_dim = io::read_pod<std::int32_t>(in);

  SacAgent agent(state_dim, cfg, 0);
  auto read_into = [&](neural::Mlp& net) {
    neural::Mlp loaded = neural::read_mlp_block(in);
    if (loaded.dims() != net.dims())
      throw ConfigError("agent checkpoint: network shape mismatch");
    std::copy(loaded.params().begin(), loaded.params().end(), net.params().begin());
  };
  read_into(agent.actor_);
  read_into(agent.critic1_);
  read_into(agent.critic2_);
  read_into(agent.target1_);
  read_into(agent.target2_);
  neural::read_adam_block(in, agent.opt_actor_);
  neural::read_adam_block(in, agent.opt_critic1_);
  neural::read_adam_block(in, agent.opt_critic2_);
  std::istringstream rng_text(io::read_string(in));
  rng_text >> agent.rng_ >> agent.normal_;
  io::read_pod<std::uint64_t>(in);  // buffer size (informational)
  io::read_pod<std::uint64_t>(in);  // total insertions
  if (io::read_pod<std::uint8_t>(in) != 0 && buffer) buffer->read_contents(in);
  return agent;
}

}  // namespace flowrl::sac
