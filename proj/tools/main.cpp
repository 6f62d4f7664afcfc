#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "flowrl/analysis/psd.hpp"
#include "flowrl/analysis/stats.hpp"
#include "flowrl/errors.hpp"
#include "flowrl/flow/field_export.hpp"
#include "flowrl/harness/evaluator.hpp"
#include "flowrl/harness/trainer.hpp"
#include "flowrl/io/csv.hpp"

namespace fs = std::filesystem;
using namespace flowrl;

namespace {

harness::RunParams load_params(const std::string& config_path) {
  if (!fs::exists(config_path))
    throw ConfigError("config file not found: " + config_path);
  return harness::load_run_config(config_path);
}

fs::path baseline_dir(const harness::RunParams& params, const std::string& out,
                      const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  return fs::path(out) / params.training.name / "baseline";
}

int cmd_baseline(const std::string& config_path, const std::string& out,
                 const std::string& explicit_dir) {
  const harness::RunParams params = load_params(config_path);
  const fs::path dir = baseline_dir(params, out, explicit_dir);
  const harness::BaselineArtifacts artifacts = harness::ensure_baseline(params, dir, true);
  std::printf("baseline written to %s\n", dir.string().c_str());
  std::printf("  cd_mean=%.4f cd_max=%.4f cl_max=%.4f cl_std=%.4f St=%.4f\n",
              artifacts.stats.cd_mean, artifacts.stats.cd_max, artifacts.stats.cl_max,
              artifacts.stats.cl_std, artifacts.stats.strouhal);
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& out,
              const std::string& explicit_baseline, long seed_override) {
  harness::RunParams params = load_params(config_path);
  if (seed_override >= 0)
    params.training.seeds = {static_cast<std::uint64_t>(seed_override)};
  const fs::path bdir = baseline_dir(params, out, explicit_baseline);
  const harness::BaselineArtifacts artifacts = harness::ensure_baseline(params, bdir, true);
  const auto results = harness::train_run(params, out, artifacts, true);
  for (const auto& r : results)
    std::printf("seed %llu: %zu episodes -> %s\n",
                static_cast<unsigned long long>(r.seed), r.episodes.size(),
                r.dir.string().c_str());
  return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& checkpoint,
                 const std::string& out, const std::string& explicit_baseline,
                 double duration) {
  const harness::RunParams params = load_params(config_path);
  const fs::path bdir = baseline_dir(params, "runs", explicit_baseline);
  if (!fs::exists(bdir / "snapshot.bin"))
    throw ConfigError("baseline not found at " + bdir.string() +
                      " (run the baseline command first or pass --baseline)");
  const harness::BaselineArtifacts artifacts = harness::load_baseline(bdir);
  sac::SacAgent agent = sac::SacAgent::load(checkpoint);
  const harness::EnvParams env = harness::make_env_params(params, artifacts.stats);
  if (duration <= 0.0) duration = params.training.eval_time_units;
  const harness::EvalResult result =
      harness::evaluate(agent, env, artifacts.snapshot, duration);

  fs::create_directories(out);
  std::vector<std::vector<double>> rows;
  for (const auto& f : result.force_trace) rows.push_back({f.t, f.cd, f.cl});
  io::write_csv((fs::path(out) / "eval_forces.csv").string(), {"t", "cd", "cl"}, rows);
  rows.clear();
  for (const auto& a : result.action_trace)
    rows.push_back({static_cast<double>(a.step), a.a_raw, a.v_top, a.v_bottom, a.q_star});
  io::write_csv((fs::path(out) / "eval_actions.csv").string(),
                {"step", "a_raw", "v_top", "v_bottom", "q_star"}, rows);
  io::write_csv((fs::path(out) / "eval_summary.csv").string(),
                {"mean_cd", "std_cd", "std_cl", "reduction_pct", "total_reward",
                 "diverged"},
                {{result.summary.mean_cd, result.summary.std_cd, result.summary.std_cl,
                  result.summary.reduction_pct, result.total_reward,
                  result.diverged ? 1.0 : 0.0}});
  std::printf("evaluate: mean_cd=%.4f std_cl=%.4f reduction=%.2f%%%s\n",
              result.summary.mean_cd, result.summary.std_cl,
              result.summary.reduction_pct, result.diverged ? " (diverged)" : "");
  return 0;
}

int cmd_analyze(const std::vector<std::string>& episode_files, const std::string& trace_file,
                const std::string& out, double baseline_cd, long window) {
  fs::create_directories(out);
  if (!episode_files.empty()) {
    std::vector<std::vector<double>> cd_curves, reward_curves, clstd_curves;
    for (const auto& f : episode_files) {
      const io::CsvTable t = io::read_csv(f);
      cd_curves.push_back(t.column_values("mean_cd"));
      clstd_curves.push_back(t.column_values("std_cl"));
      reward_curves.push_back(t.column_values("total_reward"));
    }
    const auto cd = analysis::aggregate_learning_curves(cd_curves);
    const auto cl = analysis::aggregate_learning_curves(clstd_curves);
    const auto rw = analysis::aggregate_learning_curves(reward_curves);
    std::vector<std::vector<double>> rows;
    for (std::size_t e = 0; e < cd.mean.size(); ++e)
      rows.push_back({static_cast<double>(e), cd.mean[e], cd.stddev[e], cd.smoothed[e],
                      cl.mean[e], cl.stddev[e], cl.smoothed[e], rw.mean[e], rw.stddev[e],
                      rw.smoothed[e]});
    io::write_csv((fs::path(out) / "learning_curves.csv").string(),
                  {"episode", "mean_cd", "mean_cd_std", "mean_cd_smooth", "std_cl",
                   "std_cl_std", "std_cl_smooth", "reward", "reward_std", "reward_smooth"},
                  rows);
    std::printf("analyze: wrote %s\n",
                (fs::path(out) / "learning_curves.csv").string().c_str());
  }
  if (!trace_file.empty()) {
    const io::CsvTable t = io::read_csv(trace_file);
    const std::vector<double>ts = t.column_values("t");
    const std::vector<double> cd = t.column_values("cd");
    const std::vector<double> cl = t.column_values("cl");
    if (ts.size() < 2) throw ConfigError("analyze: trace too short");
    const double dt = ts[1] - ts[0];
    for (const auto& [name, series] : {std::pair{"cd", &cd}, std::pair{"cl", &cl}}) {
      const analysis::PsdResult psd = analysis::welch_psd(*series, dt);
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < psd.frequency.size(); ++k)
        rows.push_back({psd.frequency[k], psd.power[k]});
      io::write_csv((fs::path(out) / (std::string("psd_") + name + ".csv")).string(),
                    {"frequency", "power"}, rows);
    }
    const std::size_t w =
        window > 0 ? static_cast<std::size_t>(window) : std::max<std::size_t>(1, cd.size() / 2);
    const analysis::TraceSummary s = analysis::summarize(cd, cl, w, baseline_cd);
    io::write_csv((fs::path(out) / "summary.csv").string(),
                  {"mean_cd", "std_cd", "std_cl", "reduction_pct"},
                  {{s.mean_cd, s.std_cd, s.std_cl, s.reduction_pct}});
    std::printf("analyze: mean_cd=%.4f std_cd=%.4f std_cl=%.4f reduction=%.2f%%\n",
                s.mean_cd, s.std_cd, s.std_cl, s.reduction_pct);
  }
  if (episode_files.empty() && trace_file.empty())
    throw ConfigError("analyze: pass --episodes and/or --trace");
  return 0;
}

int cmd_export_field(const std::string& snapshot, const std::string& out) {
  const flow::LatticeField field = flow::LatticeField::load_snapshot(snapshot);
  flow::export_field_csv(field, out);
  std::printf("export-field: wrote %s (%dx%d)\n", out.c_str(), field.nx(), field.ny());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop cylinder wake control: lattice-Boltzmann plant with a "
               "soft actor-critic agent on lifted surface-pressure features"};
  app.require_subcommand(1);

  std::string config_path, out = "runs", baseline_override, checkpoint, trace_file,
              snapshot, export_out;
  std::vector<std::string> episode_files;
  long seed_override = -1, window = 0;
  double duration = 0.0, baseline_cd = 0.0;

  auto* c_base = app.add_subcommand("baseline", "Run the uncontrolled flow to a "
                                                "stationary snapshot and record stats");
  c_base->add_option("--config", config_path, "run configuration file")->required();
  c_base->add_option("--out", out, "output root directory");
  c_base->add_option("--baseline", baseline_override, "explicit baseline directory");

  auto* c_train = app.add_subcommand("train", "Train the control agent");
  c_train->add_option("--config", config_path, "run configuration file")->required();
  c_train->add_option("--out", out, "output root directory");
  c_train->add_option("--seed", seed_override, "train only this seed");
  c_train->add_option("--baseline", baseline_override, "explicit baseline directory");

  auto* c_eval = app.add_subcommand("evaluate", "Deterministic rollout of a checkpoint");
  c_eval->add_option("--config", config_path, "run configuration file")->required();
  c_eval->add_option("--checkpoint", checkpoint, "agent checkpoint file")->required();
  c_eval->add_option("--out", out, "output directory")->required();
  c_eval->add_option("--baseline", baseline_override, "explicit baseline directory");
  c_eval->add_option("--duration", duration, "rollout length in time units");

  auto* c_an = app.add_subcommand("analyze", "Post-process traces and learning curves");
  c_an->add_option("--episodes", episode_files, "episodes.csv files (one per seed)");
  c_an->add_option("--trace", trace_file, "force trace csv (t,cd,cl)");
  c_an->add_option("--out", out, "output directory")->required();
  c_an->add_option("--baseline-cd", baseline_cd, "baseline mean drag for reductions");
  c_an->add_option("--window", window, "summary window in samples");

  auto* c_exp = app.add_subcommand("export-field", "Dump a snapshot as a field CSV");
  c_exp->add_option("--snapshot", snapshot, "snapshot file")->required();
  c_exp->add_option("--out", export_out, "output csv path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_base->parsed()) return cmd_baseline(config_path, out, baseline_override);
    if (c_train->parsed()) return cmd_train(config_path, out, baseline_override, seed_override);
    if (c_eval->parsed())
      return cmd_evaluate(config_path, checkpoint, out, baseline_override, duration);
    if (c_an->parsed())
      return cmd_analyze(episode_files, trace_file, out, baseline_cd, window);
    if (c_exp->parsed()) return cmd_export_field(snapshot, export_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
