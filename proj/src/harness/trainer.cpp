#include "flowrl/harness/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "flowrl/analysis/stats.hpp"
#include "flowrl/errors.hpp"
#include "flowrl/io/csv.hpp"

namespace flowrl::harness {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSnapshotFile = "snapshot.bin";
constexpr const char* kStatsFile = "baseline.csv";

void write_stats(const BaselineResult& stats, const fs::path& path) {
  io::write_csv(path.string(),
                {"cd_mean", "cd_max", "cl_max", "cl_std", "strouhal",
                 "shedding_period_tu", "time_units", "steps"},
                {{stats.cd_mean, stats.cd_max, stats.cl_max, stats.cl_std, stats.strouhal,
                  stats.shedding_period_tu, stats.time_units,
                  static_cast<double>(stats.steps)}});
}

BaselineResult read_stats(const fs::path& path) {
  const io::CsvTable t = io::read_csv(path.string());
  if (t.rows.size() != 1) throw ConfigError("baseline stats: expected one row");
  BaselineResult s;
  s.cd_mean = t.rows[0][t.column("cd_mean")];
  s.cd_max = t.rows[0][t.column("cd_max")];
  s.cl_max = t.rows[0][t.column("cl_max")];
  s.cl_std = t.rows[0][t.column("cl_std")];
  s.strouhal = t.rows[0][t.column("strouhal")];
  s.shedding_period_tu = t.rows[0][t.column("shedding_period_tu")];
  s.time_units = t.rows[0][t.column("time_units")];
  s.steps = static_cast<long>(t.rows[0][t.column("steps")]);
  return s;
}

void write_force_trace(const std::vector<flow::ForceSample>& trace, const fs::path& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trace.size());
  for (const auto& f : trace) rows.push_back({f.t, f.cd, f.cl});
  io::write_csv(path.string(), {"t", "cd", "cl"}, rows);
}

void write_action_trace(const std::vector<ActionRecord >& trace, const fs::path& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trace.size());
  for (const auto& a : trace)
    rows.push_back({static_cast<double>(a.step), a.a_raw, a.v_top, a.v_bottom, a.q_star});
  io::write_csv(path.string(), {"step", "a_raw", "v_top", "v_bottom", "q_star"}, rows);
}

}  // namespace

void save_baseline(const BaselineArtifacts& artifacts, const fs::path& dir) {
  fs::create_directories(dir);
  artifacts.snapshot.save_snapshot((dir / kSnapshotFile).string());
  write_stats(artifacts.stats, dir / kStatsFile);
}

BaselineArtifacts load_baseline(const fs::path& dir) {
  return BaselineArtifacts{
      flow::LatticeField::load_snapshot((dir / kSnapshotFile).string()),
      read_stats(dir / kStatsFile)};
}

BaselineArtifacts ensure_baseline(const RunParams& params, const fs::path& dir,
                                  bool log_progress) {
  if (fs::exists(dir / kSnapshotFile) && fs::exists(dir / kStatsFile)) {
    BaselineArtifacts cached = load_baseline(dir);
    const flow::FlowConfig& have = cached.snapshot.config();
    if (have.reynolds == params.flow.reynolds && have.diameter_lu == params.flow.diameter_lu &&
        have.u_max_lb == params.flow.u_max_lb) {
      if (log_progress) std::printf("baseline: reusing %s\n", dir.string().c_str());
      return cached;
    }
  }
  if (log_progress)
    std::printf("baseline: running uncontrolled flow (Re=%g, D=%d)...\n",
                params.flow.reynolds, params.flow.diameter_lu);
  flow::LatticeField field(params.flow, params.jets);
  BaselineOptions opts;
  opts.max_time_units = params.training.baseline_max_time_units;
  BaselineArtifacts artifacts{field, BaselineResult{}};
  artifacts.stats = prepare_baseline(artifacts.snapshot, opts);
  save_baseline(artifacts, dir);
  if (log_progress)
    std::printf("baseline: cd_mean=%.4f cd_max=%.4f cl_max=%.4f St=%.4f (%.0f TU)\n",
                artifacts.stats.cd_mean, artifacts.stats.cd_max, artifacts.stats.cl_max,
                artifacts.stats.strouhal, artifacts.stats.time_units);
  return artifacts;
}

EnvParams make_env_params(const RunParams& params, const BaselineResult& baseline) {
  EnvParams env;
  env.flow = params.flow;
  env.jets = params.jets;
  env.layout = sensing::SensorLayout::parse(params.layout_spec);
  env.lift = params.lift;
  env.steps_per_episode = params.training.steps_per_episode;
  env.agent_step_duration_tu =
      params.training.agent_step_fraction * baseline.shedding_period_tu;
  env.reward_window_tu = baseline.shedding_period_tu;
  env.cd_baseline = baseline.cd_mean;
  env.cl_penalty_weight = params.training.cl_penalty_weight;
  env.divergence_penalty = params.training.divergence_penalty;
  env.standardize_window = params.training.standardize_window;
  return env;
}

SeedRunResult train_seed(const RunParams& params, std::uint64_t seed,
                         const BaselineArtifacts& baseline, const fs::path& out_dir,
                         const std::function<void(const EpisodeRow&)>& on_episode) {
  const EnvParams env_params = make_env_params(params, baseline.stats);
  const int n_envs = params.training.n_envs;
  const int total_episodes = params.training.episodes;

  fs::create_directories(out_dir / "traces");
  fs::create_directories(out_dir / "checkpoints");
  {
    std::ofstream lock(out_dir / "config.lock");
    lock << "# seed = " << seed << "\n";
    char hash_line[64];
    std::snprintf(hash_line, sizeof(hash_line), "# config_hash = %016llx\n",
                  static_cast<unsigned long long>(config_hash(params)));
    lock << hash_line << serialize_run_config(params);
  }

  std::vector<CylinderEnv> envs;
  envs.reserve(n_envs);
  for (int e = 0; e < n_envs; ++e) envs.emplace_back(env_params, baseline.snapshot);

  const int state_dim = envs.front().state_dim();
  sac::SacAgent agent(state_dim, params.sac, seed);
  sac::ReplayBuffer buffer(params.sac.buffer_capacity);
  std::mt19937_64 sample_rng(seed * 0x9E3779B97F4A7C15ULL + 0x1234567ULL);

  std::vector<std::vector<double>> states(n_envs);
  std::vector<double> episode_reward(n_envs, 0.0);
  for (int e = 0; e < n_envs; ++e) {
    states[e] = feature::flatten(envs[e].reset());
    episode_reward[e] = 0.0;
  }

  std::ofstream episodes_csv(out_dir / "episodes.csv");
  episodes_csv << "episode,mean_cd,std_cl,total_reward\n";

  SeedRunResult result;
  result.seed = seed;
  result.dir = out_dir;

  std::vector<double> actions(n_envs);
  std::vector<CylinderEnv::StepOutcome> outcomes(n_envs);
  int episodes_done = 0;
  int steps_since_update = 0;

  auto finish_episode = [&](int e) {
    const auto& trace = envs[e].force_trace();
    std::vector<double> cd, cl;
    cd.reserve(trace.size());
    for (const auto& f : trace) {
      cd.push_back(f.cd);
      cl.push_back(f.cl);
    }
    EpisodeRow row;
    row.episode = episodes_done;
    row.mean_cd = cd.empty() ? 0.0 : analysis::mean_of(cd);
    row.std_cl = cl.empty() ? 0.0 : analysis::std_of(cl);
    row.total_reward = episode_reward[e];
    result.episodes.push_back(row);
    episodes_csv << row.episode << ',' << row.mean_cd << ',' << row.std_cl << ','
                 << row.total_reward << '\n';
    episodes_csv.flush();
    if (on_episode) on_episode(row);

    const bool dump_trace = params.training.trace_every > 0 &&
                            (row.episode % params.training.trace_every == 0 ||
                             row.episode + 1 == total_episodes);
    if (dump_trace) {
      char name[64];
      std::snprintf(name, sizeof(name), "forces_ep%05d.csv", row.episode);
      write_force_trace(trace, out_dir / "traces" / name);
      std::snprintf(name, sizeof(name), "actions_ep%05d.csv", row.episode);
      write_action_trace(envs[e].action_trace(), out_dir / "traces" / name);
    }
    ++episodes_done;
    if (params.training.checkpoint_every > 0 &&
        episodes_done % params.training.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "ep%05d.ckpt", episodes_done);
      agent.save((out_dir / "checkpoints" / name).string());
    }
    episode_reward[e] = 0.0;
    states[e] = feature::flatten(envs[e].reset());
  };

  while (episodes_done < total_episodes) {
    // Actions are sampled sequentially in env order from the one agent RNG.
    for (int e = 0; e < n_envs; ++e)
      actions[e] = agent.select_action(states[e], sac::SacAgent::Mode::kStochastic);

    if (n_envs == 1) {
      outcomes[0] = envs[0].step(actions[0]);
    } else {
      std::vector<std::thread> workers;
      workers.reserve(n_envs);
      for (int e = 0; e < n_envs; ++e)
        workers.emplace_back([&, e] { outcomes[e] = envs[e].step(actions[e]); });
      for (auto& w : workers) w.join();
    }

    for (int e = 0; e < n_envs; ++e) {
      sac::Transition tr;
      tr.state = states[e];
      tr.action = actions[e];
      tr.reward = outcomes[e].reward;
      tr.next_state = feature::flatten(outcomes[e].state);
      tr.done = outcomes[e].terminal;
      buffer.store(std::move(tr));
      episode_reward[e] += outcomes[e].reward;
      states[e] = feature::flatten(outcomes[e].state);
    }
    // The update cadence counts agent steps across all environments, so one
    // gradient step runs per environment step elapsed.
    steps_since_update += n_envs;

    if (steps_since_update >= params.sac.update_every &&
        buffer.size() >= static_cast<std::size_t>(params.sac.batch_size)) {
      std::vector<const sac::Transition*> batch(params.sac.batch_size);
      for (int g = 0; g < params.sac.gradient_steps; ++g) {
        const std::vector<std::size_t> picks =
            buffer.sample_indices(params.sac.batch_size, sample_rng);
        for (std::size_t b = 0; b < picks.size(); ++b) batch[b] = &buffer.at(picks[b]);
        agent.update(batch);
      }
      steps_since_update = 0;
    }

    for (int e = 0; e < n_envs && episodes_done < total_episodes; ++e) {
      if (outcomes[e].terminal || outcomes[e].truncated) finish_episode(e);
    }
  }

  result.final_checkpoint = out_dir / "checkpoints" / "final.ckpt";
  agent.save(result.final_checkpoint.string(), nullptr);
  return result;
}

std::vector<SeedRunResult> train_run(const RunParams& params, const fs::path& out_root,
                                     const BaselineArtifacts& baseline, bool log_progress) {
  std::vector<SeedRunResult> results;
  for (std::uint64_t seed : params.training.seeds) {
    const fs::path dir = out_root / params.training.name / ("seed" + std::to_string(seed));
    if (log_progress)
      std::printf("train: seed %llu -> %s\n", static_cast<unsigned long long>(seed),
                  dir.string().c_str());
    std::function<void(const EpisodeRow&)> cb;
    if (log_progress) {
      cb = [](const EpisodeRow& row) {
        if (row.episode % 10 == 0)
          std::printf("  episode %4d: mean_cd=%.4f std_cl=%.4f reward=%.3f\n", row.episode,
                      row.mean_cd, row.std_cl, row.total_reward);
      };
    }
    results.push_back(train_seed(params, seed, baseline, dir, cb));
  }
  return results;
}

}  // namespace flowrl::harness
