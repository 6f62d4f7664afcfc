#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "flowrl/harness/baseline.hpp"
#include "flowrl/harness/environment.hpp"
#include "flowrl/harness/run_config.hpp"
#include "flowrl/sac/agent.hpp"

namespace flowrl::harness {

/// Baseline snapshot plus its measured statistics, as stored on disk by the
/// `baseline` command and consumed by training and evaluation.
struct BaselineArtifacts {
  flow::LatticeField snapshot;
  BaselineResult stats;
};

/// Computes (or reloads, when the files already exist and match the flow
/// configuration) the baseline artifacts under `dir`.
BaselineArtifacts ensure_baseline(const RunParams& params, const std::filesystem::path& dir,
                                  bool log_progress = false);
BaselineArtifacts load_baseline(const std::filesystem::path& dir);
void save_baseline(const BaselineArtifacts& artifacts, const std::filesystem::path& dir);

struct EpisodeRow {
  int episode = 0;
  double mean_cd = 0.0;
  double std_cl = 0.0;
  double total_reward = 0.0;
};

struct SeedRunResult {
  std::uint64_t seed = 0;
  std::vector<EpisodeRow> episodes;
  std::filesystem::path dir;
  std::filesystem::path final_checkpoint;
};

/// Resolved environment parameters for a run (hold duration and reward window
/// derived from the measured shedding period).
EnvParams make_env_params(const RunParams& params, const BaselineResult& baseline);

/// Trains one seed: n_envs workers step in lockstep, transitions feed one
/// replay buffer, and the single trainer runs an update round every
/// `update_every` lockstep steps. Writes episodes.csv, traces/, checkpoints/
/// and config.lock under `out_dir`. Deterministic for fixed seed and n_envs.
SeedRunResult train_seed(const RunParams& params, std::uint64_t seed,
                         const BaselineArtifacts& baseline,
                         const std::filesystem::path& out_dir,
                         const std::function<void(const EpisodeRow&)>& on_episode = {});

/// Full run: every seed in params.training.seeds under out_root/<name>/seed<k>.
std::vector<SeedRunResult> train_run(const RunParams& params,
                                     const std::filesystem::path& out_root,
                                     const BaselineArtifacts& baseline,
                                     bool log_progress = false);

}  // namespace flowrl::harness
