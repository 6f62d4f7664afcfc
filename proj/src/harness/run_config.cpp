#include "flowrl/harness/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "flowrl/errors.hpp"
#include "flowrl/sensing/layout.hpp"

namespace flowrl::harness {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("run config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

long to_long(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("run config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

std::vector<std::uint64_t> to_seed_list(const std::string& v, const std::string& key) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    seeds.push_back(static_cast<std::uint64_t>(to_long(item, key)));
  }
  if (seeds.empty()) throw ConfigError("run config: key '" + key + "' expects seed numbers");
  return seeds;
}

using Setter = std::function<void(RunParams&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"flow.reynolds", [](RunParams& p, const std::string& v, const std::string& k) {
         p.flow.reynolds = to_double(v, k);
       }},
      {"flow.diameter_cells", [](RunParams& p, const std::string& v, const std::string& k) {
         p.flow.diameter_lu = static_cast<int>(to_long(v, k));
       }},
      {"flow.u_max_lb", [](RunParams& p, const std::string& v, const std::string& k) {
         p.flow.u_max_lb = to_double(v, k);
       }},
      {"flow.ramp_time_units", [](RunParams& p, const std::string& v, const std::string& k) {
         p.flow.ramp_time_units = to_double(v, k);
       }},
      {"jets.width_deg", [](RunParams& p, const std::string& v, const std::string& k) {
         p.jets.width_deg = to_double(v, k);
       }},
      {"jets.alpha_smooth", [](RunParams& p, const std::string& v, const std::string& k) {
         p.jets.alpha_smooth = to_double(v, k);
       }},
      {"jets.max_amplitude", [](RunParams& p, const std::string& v, const std::string& k) {
         p.jets.max_amplitude = to_double(v, k);
         p.sac.action_scale = p.jets.max_amplitude;
       }},
      {"jets.q_star_cap", [](RunParams& p, const std::string& v, const std::string& k) {
         p.jets.q_star_cap = to_double(v, k);
       }},
      {"sensors.layout", [](RunParams& p, const std::string& v, const std::string&) {
         sensing::SensorLayout::parse(v);  // validate now
         p.layout_spec = v;
       }},
      {"agent.hidden", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.hidden = static_cast<int>(to_long(v, k));
       }},
      {"agent.gamma", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.gamma = to_double(v, k);
       }},
      {"agent.alpha_temp", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.alpha_temp = to_double(v, k);
       }},
      {"agent.actor_lr", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.actor_lr = to_double(v, k);
       }},
      {"agent.critic_lr", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.critic_lr = to_double(v, k);
       }},
      {"agent.tau_target", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.tau_target = to_double(v, k);
       }},
      {"agent.batch_size", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.batch_size = static_cast<int>(to_long(v, k));
       }},
      {"agent.update_every", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.update_every = static_cast<int>(to_long(v, k));
       }},
      {"agent.gradient_steps", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.gradient_steps = static_cast<int>(to_long(v, k));
       }},
      {"agent.buffer_capacity", [](RunParams& p, const std::string& v, const std::string& k) {
         p.sac.buffer_capacity = static_cast<std::uint64_t>(to_long(v, k));
       }},
      {"agent.lift_rows", [](RunParams& p, const std::string& v, const std::string& k) {
         p.lift.rows = static_cast<int>(to_long(v, k));
       }},
      {"agent.alpha_scale", [](RunParams& p, const std::string& v, const std::string& k) {
         p.lift.alpha_scale = to_double(v, k);
       }},
      {"agent.beta_scale", [](RunParams& p, const std::string& v, const std::string& k) {
         p.lift.beta_scale = to_double(v, k);
       }},
      {"training.name", [](RunParams& p, const std::string& v, const std::string&) {
         p.training.name = v;
       }},
      {"training.episodes", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.episodes = static_cast<int>(to_long(v, k));
       }},
      {"training.n_envs", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.n_envs = static_cast<int>(to_long(v, k));
       }},
      {"training.seeds", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.seeds = to_seed_list(v, k);
       }},
      {"training.steps_per_episode", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.steps_per_episode = static_cast<int>(to_long(v, k));
       }},
      {"training.agent_step_fraction", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.agent_step_fraction = to_double(v, k);
       }},
      {"training.cl_penalty_weight", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.cl_penalty_weight = to_double(v, k);
       }},
      {"training.divergence_penalty", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.divergence_penalty = to_double(v, k);
       }},
      {"training.standardize_window", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.standardize_window = static_cast<int>(to_long(v, k));
       }},
      {"training.checkpoint_every", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.checkpoint_every = static_cast<int>(to_long(v, k));
       }},
      {"training.trace_every", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.trace_every = static_cast<int>(to_long(v, k));
       }},
      {"training.baseline_max_time_units", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.baseline_max_time_units = to_double(v, k);
       }},
      {"training.eval_time_units", [](RunParams& p, const std::string& v, const std::string& k) {
         p.training.eval_time_units = to_double(v, k);
       }},
  };
  return table;
}

}  // namespace

RunParams parse_run_config_text(const std::string& text) {
  RunParams params;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("run config: malformed section at line " + std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "flow" && section != "jets" && section != "sensors" &&
          section != "agent" && section != "training")
        throw ConfigError("run config: unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("run config: expected 'key = value' at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("run config: key '" + key + "' appears before any section");
    const std::string full = section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end())
      throw ConfigError("run config: unknown key '" + key + "' in section [" + section + "]");
    it->second(params, value, full);
  }
  params.flow.validate();
  params.jets.validate();
  params.lift.validate();
  params.sac.validate();
  if (params.training.episodes < 1 || params.training.n_envs < 1)
    throw ConfigError("run config: episodes and n_envs must be positive");
  if (params.training.standardize_window < 2)
    throw ConfigError("run config: standardize_window must be at least 2");
  return params;
}

RunParams load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("run config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config_text(text.str());
}

std::string serialize_run_config(const RunParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "[flow]\n"
      << "reynolds = " << p.flow.reynolds << "\n"
      << "diameter_cells = " << p.flow.diameter_lu << "\n"
      << "u_max_lb = " << p.flow.u_max_lb << "\n"
      << "ramp_time_units = " << p.flow.ramp_time_units << "\n"
      << "\n[jets]\n"
      << "width_deg = " << p.jets.width_deg << "\n"
      << "alpha_smooth = " << p.jets.alpha_smooth << "\n"
      << "max_amplitude = " << p.jets.max_amplitude << "\n"
      << "q_star_cap = " << p.jets.q_star_cap << "\n"
      << "\n[sensors]\n"
      << "layout = " << p.layout_spec << "\n"
      << "\n[agent]\n"
      << "hidden = " << p.sac.hidden << "\n"
      << "gamma = " << p.sac.gamma << "\n"
      << "alpha_temp = " << p.sac.alpha_temp << "\n"
      << "actor_lr = " << p.sac.actor_lr << "\n"
      << "critic_lr = " << p.sac.critic_lr << "\n"
      << "tau_target = " << p.sac.tau_target << "\n"
      << "batch_size = " << p.sac.batch_size << "\n"
      << "update_every = " << p.sac.update_every << "\n"
      << "gradient_steps = " << p.sac.gradient_steps << "\n"
      << "buffer_capacity = " << p.sac.buffer_capacity << "\n"
      << "lift_rows = " << p.lift.rows << "\n"
      << "alpha_scale = " << p.lift.alpha_scale << "\n"
      << "beta_scale = " << p.lift.beta_scale << "\n"
      << "\n[training]\n"
      << "name = " << p.training.name << "\n"
      << "episodes = " << p.training.episodes << "\n"
      << "n_envs = " << p.training.n_envs << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < p.training.seeds.size(); ++i)
    out << p.training.seeds[i] << (i + 1 < p.training.seeds.size() ? "," : "");
  out << "\n"
      << "steps_per_episode = " << p.training.steps_per_episode << "\n"
      << "agent_step_fraction = " << p.training.agent_step_fraction << "\n"
      << "cl_penalty_weight = " << p.training.cl_penalty_weight << "\n"
      << "divergence_penalty = " << p.training.divergence_penalty << "\n"
      << "standardize_window = " << p.training.standardize_window << "\n"
      << "checkpoint_every = " << p.training.checkpoint_every << "\n"
      << "trace_every = " << p.training.trace_every << "\n"
      << "baseline_max_time_units = " << p.training.baseline_max_time_units << "\n"
      << "eval_time_units = " << p.training.eval_time_units << "\n";
  return out.str();
}

std::uint64_t config_hash(const RunParams& params) {
  const std::string text = serialize_run_config(params);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace flowrl::harness
