#include "flowrl/harness/evaluator.hpp"

#include <cmath>

#include "flowrl/errors.hpp"
#include "flowrl/feature/lifted_state.hpp"

namespace flowrl::harness {

EvalResult evaluate(sac::SacAgent& agent, const EnvParams& params,
                    const flow::LatticeField& snapshot, double duration_tu) {
  EnvParams rollout = params;
  const int agent_steps = std::max(
      1, static_cast<int>(std::ceil(duration_tu / rollout.agent_step_duration_tu)));
  rollout.steps_per_episode = agent_steps;

  CylinderEnv env(rollout, snapshot);
  std::vector<double> state = feature::flatten(env.reset());

  EvalResult result;
  for (int s = 0; s < agent_steps; ++s) {
    const double action =
        agent.select_action(state, sac::SacAgent::Mode::kDeterministic);
    const CylinderEnv::StepOutcome out = env.step(action);
    result.total_reward += out.reward;
    state = feature::flatten(out.state);
    if (out.terminal) {
      result.diverged = true;
      break;
    }
    if (out.truncated) break;
  }
  result.force_trace = env.force_trace();
  result.action_trace = env.action_trace();

  std::vector<double> cd, cl;
  cd.reserve(result.force_trace.size());
  for (const auto& f : result.force_trace) {
    cd.push_back(f.cd);
    cl.push_back(f.cl);
  }
  if (!cd.empty()) {
    const std::size_t window = std::max<std::size_t>(1, cd.size() * 2 / 3);
    result.summary = analysis::summarize(cd, cl, window, params.cd_baseline);
  }
  return result;
}

}  // namespace flowrl::harness
