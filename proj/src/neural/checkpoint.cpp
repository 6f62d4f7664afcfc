#include "flowrl/neural/checkpoint.hpp"

#include <fstream>

#include "flowrl/io/binary.hpp"

namespace flowrl::neural {

namespace {
constexpr char kMagic[8] = {'F', 'L', 'O', 'W', 'M', 'L', 'P', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_mlp_block(std::ostream& out, const Mlp& net) {
  io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(net.dims().size()));
  for (int d : net.dims()) io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  io::write_f64_array(out, net.params());
}

Mlp read_mlp_block(std::istream& in) {
  const auto n_dims = io::read_pod<std::uint32_t>(in);
  if (n_dims < 2 || n_dims > 16) throw ConfigError("network checkpoint: corrupt layer count");
  std::vector<int> dims(n_dims);
  for (auto& d : dims) d = static_cast<int>(io::read_pod<std::uint32_t>(in));
  Mlp net(dims, 0);
  const std::vector<double> params = io::read_f64_array(in);
  if (params.size() != net.param_count())
    throw ConfigError("network checkpoint: parameter count mismatch");
  std::copy(params.begin(), params.end(), net.params().begin());
  return net;
}

void write_adam_block(std::ostream& out, const Adam& opt) {
  io::write_pod<double>(out, opt.learning_rate());
  io::write_pod<std::int64_t>(out, opt.step_count());
  io::write_f64_array(out, opt.first_moment());
  io::write_f64_array(out, opt.second_moment());
}

void read_adam_block(std::istream& in, Adam& opt) {
  io::read_pod<double>(in);  // stored for inspection; construction fixes lr
  const auto t = io::read_pod<std::int64_t>(in);
  const std::vector<double> m = io::read_f64_array(in);
  const std::vector<double> v = io::read_f64_array(in);
  opt.restore(t, m, v);
}

void save_network(const std::string& path, const Mlp& net, const Adam* opt,
                  const std::string& rng_state) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("network checkpoint: cannot write " + path);
  io::write_raw(out, kMagic, sizeof(kMagic));
  io::write_pod(out, kVersion);
  write_mlp_block(out, net);
  io::write_pod<std::uint8_t>(out, opt ? 1 : 0);
  if (opt) write_adam_block(out, *opt);
  io::write_string(out, rng_state);
  if (!out) throw ConfigError("network checkpoint: write failed for " + path);
}

NetworkCheckpoint load_network(const std::string& path, double lr_for_opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("network checkpoint: cannot open " + path);
  io::expect_magic(in, kMagic, sizeof(kMagic), "network checkpoint");
  if (io::read_pod<std::uint32_t>(in) != kVersion)
    throw ConfigError("network checkpoint: unsupported version");
  NetworkCheckpoint ckpt{read_mlp_block(in), std::nullopt, {}};
  if (io::read_pod<std::uint8_t>(in) != 0) {
    Adam opt(ckpt.net.param_count(), lr_for_opt);
    read_adam_block(in, opt);
    ckpt.opt = std::move(opt);
  }
  ckpt.rng_state = io::read_string(in);
  return ckpt;
}

}  // namespace flowrl::neural
