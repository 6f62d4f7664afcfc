#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <thread>
#include <vector>

#include "flowrl/sac/agent.hpp"
#include "flowrl/sac/replay_buffer.hpp"

using namespace flowrl;
using sac::ReplayBuffer;
using sac::SacAgent;
using sac::SacConfig;
using sac::Transition;

namespace {
SacConfig small_config() {
  SacConfig cfg;
  cfg.hidden = 32;
  cfg.batch_size = 32;
  cfg.buffer_capacity = 100000;
  return cfg;
}

Transition make_transition(std::span<const double> s, double a, double r,
                           std::span<const double> s2, bool done) {
  return Transition{{s.begin(), s.end()}, a, r, {s2.begin(), s2.end()}, done};
}
}  // namespace

TEST_CASE("replay buffer evicts the oldest entry at capacity") {
  ReplayBuffer buf(3);
  const std::vector<double> s = {1.0};
  for (int k = 0; k < 4; ++k) buf.store(make_transition(s, k, k, s, false));
  CHECK(buf.size() == 3);
  CHECK(buf.total_insertions() == 4);
  // Entry with action 0 is gone; 1..3 remain.
  std::vector<double> actions;
  for (std::size_t k = 0; k < buf.size(); ++k) actions.push_back(buf.at(k).action);
  std::sort(actions.begin(), actions.end());
  CHECK(actions == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("stored transitions come back field-identical") {
  ReplayBuffer buf(10);
  const std::vector<double> s = {0.25, -1.5};
  const std::vector<double> s2 = {0.5, 2.5};
  buf.store(make_transition(s, 0.7, -0.3, s2, true));
  const Transition& t = buf.at(0);
  CHECK(t.state == s);
  CHECK(t.next_state == s2);
  CHECK(t.action == 0.7);
  CHECK(t.reward == -0.3);
  CHECK(t.done);
}

TEST_CASE("batch sampling is uniform without replacement") {
  ReplayBuffer buf(100);
  const std::vector<double> s = {0.0};
  for (int k = 0; k < 50; ++k) buf.store(make_transition(s, k, 0, s, false));
  std::mt19937_64 rng(5);
  const auto picks = buf.sample_indices(20, rng);
  CHECK(picks.size() == 20);
  auto sorted = picks;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK_THROWS(buf.sample_indices(51, rng));
}

TEST_CASE("concurrent producers never lose insertions") {
  ReplayBuffer buf(100000);
  const int n_threads = 4;
  const int per_thread = 5000;
  std::vector<std::thread> workers;
  for (int w = 0; w < n_threads; ++w) {
    workers.emplace_back([&buf, w] {
      const std::vector<double> s = {static_cast<double>(w)};
      for (int k = 0; k < per_thread; ++k) buf.store(make_transition(s, k, 0, s, false));
    });
  }
  for (auto& t : workers) t.join();
  CHECK(buf.size() == static_cast<std::size_t>(n_threads * per_thread));
  CHECK(buf.total_insertions() == static_cast<std::uint64_t>(n_threads * per_thread));
}

TEST_CASE("actions respect the actuator bound in both modes") {
  SacAgent agent(4, small_config(), 11);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist(0.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> state(4);
    for (double& v : state) v = dist(rng);
    CHECK(std::abs(agent.select_action(state, SacAgent::Mode::kStochastic)) <= 1.5);
    CHECK(std::abs(agent.select_action(state, SacAgent::Mode::kDeterministic)) <= 1.5);
  }
}

TEST_CASE("deterministic mode is repeatable, stochastic matches its own mean") {
  SacAgent agent(3, small_config(), 21);
  const std::vector<double> state = {0.2, -0.4, 1.0};
  const double a1 = agent.select_action(state, SacAgent::Mode::kDeterministic);
  const double a2 = agent.select_action(state, SacAgent::Mode::kDeterministic);
  CHECK(a1 == a2);

  // Monte-Carlo mean of stochastic draws against a dense-quadrature estimate
  // of E[scale tanh(mean + sigma eps)].
  const int n = 10000;
  double acc = 0.0, acc2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = agent.select_action(state, SacAgent::Mode::kStochastic);
    acc += a;
    acc2 += a * a;
  }
  const double mc_mean = acc / n;
  const double mc_se = std::sqrt((acc2 / n - mc_mean * mc_mean) / n);

  // Reconstruct the head outputs through the public actor network.
  const auto head = agent.actor().forward(state);
  const double mean = head[0];
  const double sd = std::exp(std::clamp(head[1], -20.0, 2.0));
  const int quad = 20001;
  double expect = 0.0, norm = 0.0;
  for (int k = 0; k < quad; ++k) {
    const double e = -8.0 + 16.0 * k / (quad - 1.0);
    const double w = std::exp(-0.5 * e * e);
    expect += w * 1.5 * std::tanh(mean + sd * e);
    norm += w;
  }
  expect /= norm;
  CHECK(std::abs(mc_mean - expect) < 3.0 * mc_se + 1e-6);
}

TEST_CASE("with a tiny discount and zero temperature the critics regress to the reward") {
  SacConfig cfg = small_config();
  cfg.gamma = 1e-12;
  cfg.alpha_temp = 0.0;
  cfg.critic_lr = 3e-3;
  SacAgent agent(2, cfg, 3);
  const std::vector<double> s = {0.5, -0.5};
  const Transition t = make_transition(s, 0.3, 1.7, s, false);
  std::vector<const Transition*> batch(cfg.batch_size, &t);
  for (int k = 0; k < 800; ++k) agent.update(batch);
  // Q(s, a) approaches r = 1.7 for both critics.
  std::vector<double> input(s);
  input.push_back(0.3);
  CHECK(agent.critic1().forward(input)[0] == doctest::Approx(1.7).epsilon(0.02));
  CHECK(agent.critic2().forward(input)[0] == doctest::Approx(1.7).epsilon(0.02));
}

TEST_CASE("targets follow the exact polyak recurrence, never the live critics") {
  SacConfig cfg = small_config();
  SacAgent agent(2, cfg, 9);
  std::vector<double> expected1(agent.target1().params().begin(),
                                agent.target1().params().end());
  std::vector<double> expected2(agent.target2().params().begin(),
                                agent.target2().params().end());
  std::mt19937_64 rng(17);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int round = 0; round < 3; ++round) {
    std::vector<Transition> data;
    for (int k = 0; k < cfg.batch_size; ++k) {
      std::vector<double> s = {dist(rng), dist(rng)};
      std::vector<double> s2 = {dist(rng), dist(rng)};
      data.push_back(make_transition(s, std::tanh(dist(rng)), dist(rng), s2, false));
    }
    std::vector<const Transition*> batch;
    for (const auto& t : data) batch.push_back(&t);
    agent.update(batch);
    // Expected: theta_bar <- (1 - tau) theta_bar + tau theta_new.
    const auto c1 = agent.critic1().params();
    const auto c2 = agent.critic2().params();
    for (std::size_t k = 0; k < expected1.size(); ++k) {
      expected1[k] = (1.0 - cfg.tau_target) * expected1[k] + cfg.tau_target * c1[k];
      expected2[k] = (1.0 - cfg.tau_target) * expected2[k] + cfg.tau_target * c2[k];
    }
    for (std::size_t k = 0; k < expected1.size(); ++k) {
      CHECK(agent.target1().params()[k] == doctest::Approx(expected1[k]).epsilon(1e-12));
      CHECK(agent.target2().params()[k] == doctest::Approx(expected2[k]).epsilon(1e-12));
    }
    // Targets lag the critics.
    double diff = 0.0;
    for (std::size_t k = 0; k < expected1.size(); ++k)
      diff += std::abs(agent.target1().params()[k] - c1[k]);
    CHECK(diff > 0.0);
  }
}

TEST_CASE("bandit with a known optimum: the policy finds it") {
  // Two states, quadratic reward around a state-dependent optimum, immediate
  // termination. With zero temperature the update reduces to clipped
  // double-Q actor-critic and the deterministic policy must land on the
  // analytic optimum.
  SacConfig cfg = small_config();
  cfg.hidden = 64;
  cfg.alpha_temp = 0.0;
  cfg.critic_lr = 1e-3;
  cfg.actor_lr = 5e-4;
  cfg.batch_size = 64;
  const std::vector<double> state_a = {1.0, 0.0};
  const std::vector<double> state_b = {0.0, 1.0};
  const double best_a = 0.8, best_b = -0.4;

  SacAgent agent(2, cfg, 31);
  ReplayBuffer buffer(cfg.buffer_capacity);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> act(-1.5, 1.5);
  std::bernoulli_distribution which(0.5);
  for (int k = 0; k < 4000; ++k) {
    const bool is_a = which(rng);
    const auto& s = is_a ? state_a : state_b;
    const double best = is_a ? best_a : best_b;
    const double a = act(rng);
    const double r = -(a - best) * (a - best);
    buffer.store(make_transition(s, a, r, s, true));
  }
  std::vector<const Transition*> batch(cfg.batch_size);
  for (int step = 0; step < 2000; ++step) {
    const auto picks = buffer.sample_indices(cfg.batch_size, rng);
    for (std::size_t b = 0; b < picks.size(); ++b) batch[b] = &buffer.at(picks[b]);
    const auto losses = agent.update(batch);
    CHECK(std::isfinite(losses.critic1));
    CHECK(std::isfinite(losses.actor));
  }
  const double got_a = agent.select_action(state_a, SacAgent::Mode::kDeterministic);
  const double got_b = agent.select_action(state_b, SacAgent::Mode::kDeterministic);
  CHECK(std::abs(got_a - best_a) <= 0.05 * std::abs(best_a));
  CHECK(std::abs(got_b - best_b) <= 0.05 * std::abs(best_b));
}

TEST_CASE("entropy estimates order by policy spread and reproduce under a seed") {
  SacConfig cfg = small_config();
  SacAgent wide(3, cfg, 77);
  SacAgent narrow(3, cfg, 77);
  // Zero all actor parameters: mean = 0, log_std = 0 (std 1).
  std::fill(wide.mutable_actor().params().begin(), wide.mutable_actor().params().end(), 0.0);
  std::fill(narrow.mutable_actor().params().begin(), narrow.mutable_actor().params().end(),
            0.0);
  // Push the narrow policy's log_std head bias to the clamp floor.
  narrow.mutable_actor().params()[narrow.mutable_actor().params().size() - 1] = -20.0;

  const std::vector<std::vector<double>> states = {{0.0, 0.0, 0.0}, {1.0, -1.0, 0.5}};
  const double h_wide = wide.entropy_estimate(states, 64);
  const double h_narrow = narrow.entropy_estimate(states, 64);
  CHECK(h_narrow < h_wide);

  // Fresh agents with the same seed produce the same estimate.
  SacAgent again(3, cfg, 77);
  std::fill(again.mutable_actor().params().begin(), again.mutable_actor().params().end(),
            0.0);
  SacAgent once_more(3, cfg, 77);
  std::fill(once_more.mutable_actor().params().begin(),
            once_more.mutable_actor().params().end(), 0.0);
  CHECK(again.entropy_estimate(states, 64) == once_more.entropy_estimate(states, 64));
}

TEST_CASE("entropy of a wide-bounds squashed gaussian matches the closed form") {
  // Small pre-squash std keeps tanh in its linear range, and a wide actuator
  // bound keeps the scaled Gaussian far from saturation; the policy entropy
  // then matches the closed-form Gaussian value.
  SacConfig cfg = small_config();
  cfg.action_scale = 100.0;
  SacAgent agent(2, cfg, 5);
  auto params = agent.mutable_actor().params();
  std::fill(params.begin(), params.end(), 0.0);
  params[params.size() - 1] = -2.0;  // log_std head bias: sigma = e^-2
  const std::vector<std::vector<double>> states = {{0.0, 0.0}};
  const double h = agent.entropy_estimate(states, 20000);
  const double sigma_a = 100.0 * std::exp(-2.0);
  const double closed = 0.5 * std::log(2.0 * M_PI * M_E * sigma_a * sigma_a);
  CHECK(std::abs(h - closed) / closed < 0.05);
}

TEST_CASE("losses stay finite over many updates on random data") {
  SacConfig cfg = small_config();
  cfg.hidden = 16;
  cfg.batch_size = 16;
  SacAgent agent(4, cfg, 41);
  ReplayBuffer buffer(cfg.buffer_capacity);
  std::mt19937_64 rng(19);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::uniform_real_distribution<double> act(-1.5, 1.5);
  std::bernoulli_distribution done(0.05);
  for (int k = 0; k < 2000; ++k) {
    std::vector<double> s = {dist(rng), dist(rng), dist(rng), dist(rng)};
    std::vector<double> s2 = {dist(rng), dist(rng), dist(rng), dist(rng)};
    buffer.store(make_transition(s, act(rng), 5.0 * dist(rng), s2, done(rng)));
  }
  std::vector<const Transition*> batch(cfg.batch_size);
  const long updates = 100000;
  for (long step = 0; step < updates; ++step) {
    const auto picks = buffer.sample_indices(cfg.batch_size, rng);
    for (std::size_t b = 0; b < picks.size(); ++b) batch[b] = &buffer.at(picks[b]);
    const auto losses = agent.update(batch);
    if (step % 5000 == 0 || step + 1 == updates) {
      REQUIRE(std::isfinite(losses.critic1));
      REQUIRE(std::isfinite(losses.critic2));
      REQUIRE(std::isfinite(losses.actor));
      REQUIRE(std::isfinite(losses.entropy));
    }
  }
  for (double p : agent.actor().params()) REQUIRE(std::isfinite(p));
  for (double p : agent.critic1().params()) REQUIRE(std::isfinite(p));
}

TEST_CASE("agent checkpoints restore behavior and rng state") {
  const std::string path = "test_agent_tmp.ckpt";
  SacConfig cfg = small_config();
  SacAgent agent(3, cfg, 55);
  ReplayBuffer buffer(cfg.buffer_capacity);
  const std::vector<double> s = {0.1, 0.2, 0.3};
  buffer.store(make_transition(s, 0.5, 1.0, s, false));
  buffer.store(make_transition(s, -0.5, 0.0, s, true));
  agent.save(path, &buffer);

  ReplayBuffer restored_buffer(cfg.buffer_capacity);
  SacAgent restored = SacAgent::load(path, &restored_buffer);
  CHECK(restored.state_dim() == 3);
  CHECK(restored_buffer.size() == 2);
  CHECK(restored_buffer.at(1).done);

  // Deterministic actions match bitwise; stochastic streams continue in sync.
  CHECK(agent.select_action(s, SacAgent::Mode::kDeterministic) ==
        restored.select_action(s, SacAgent::Mode::kDeterministic));
  for (int k = 0; k < 10; ++k)
    CHECK(agent.select_action(s, SacAgent::Mode::kStochastic) ==
          restored.select_action(s, SacAgent::Mode::kStochastic));
  std::filesystem::remove(path);
}
