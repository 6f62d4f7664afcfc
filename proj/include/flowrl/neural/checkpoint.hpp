#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "flowrl/neural/adam.hpp"
#include "flowrl/neural/mlp.hpp"

namespace flowrl::neural {

// Stream-level blocks used by network and agent checkpoint files.
void write_mlp_block(std::ostream& out, const Mlp& net);
Mlp read_mlp_block(std::istream& in);
void write_adam_block(std::ostream& out, const Adam& opt);
void read_adam_block(std::istream& in, Adam& opt);

/// Standalone network checkpoint: magic, version, layer dims, parameters,
/// optional Adam moments and an RNG state string.
void save_network(const std::string& path, const Mlp& net, const Adam* opt,
                  const std::string& rng_state);

struct NetworkCheckpoint {
  Mlp net;
  std::optional<Adam> opt;  // moments restored when present in the file
  std::string rng_state;
};

NetworkCheckpoint load_network(const std::string& path, double lr_for_opt);

}  // namespace flowrl::neural
