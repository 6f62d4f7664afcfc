#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowrl/actuation/jets.hpp"
#include "flowrl/flow/config.hpp"
#include "flowrl/flow/d2q9.hpp"

namespace flowrl::flow {

/// One cylinder-surface link between a fluid node and a solid node.
///
/// Links carry the exact circle intersection so the bounce-back can be
/// interpolated (linear scheme): the wall sits at fraction q of the link.
struct BoundaryLink {
  int fluid_idx;        ///< flat index (j * nx + i) of the fluid node
  std::uint8_t dir;     ///< direction from the fluid node into the solid
  double q;             ///< wall position along the link, in (0, 1]
  int away_idx;         ///< fluid node one step away from the wall, -1 if unusable
  double wall_x;        ///< circle intersection, node coordinates
  double wall_y;
  double azimuth_deg;   ///< clockwise from the foremost windward point
  int jet;              ///< -1 none, 0 top arc, 1 bottom arc
  double profile;       ///< parabolic opening profile value at the wall point
  double uw_x;          ///< wall velocity direction * profile * jet sign
  double uw_y;
  double jet_corr;      ///< wall-motion correction, scaled by the lattice jet speed
};

struct ForceSample {
  double t = 0.0;   ///< nondimensional time
  double cd = 0.0;
  double cl = 0.0;
};

/// D2Q9 BGK lattice with half-way bounce-back walls, a rasterized cylinder,
/// parabolic velocity inlet and a density-pinned zero-gradient outlet.
///
/// Deterministic given (config, action sequence); owned by one worker at a
/// time but freely movable between threads.
class LatticeField {
 public:
  LatticeField(const FlowConfig& cfg, const actuation::JetConfig& jets = {});

  /// One collide-stream cycle with the given smoothed jet state.
  /// Throws DivergenceError when an unphysical state is detected.
  void step(const actuation::JetState& jets);
  void step_uncontrolled();

  const FlowConfig& config() const { return cfg_; }
  const actuation::JetConfig& jet_config() const { return jet_cfg_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  long step_index() const { return step_; }
  double time_units() const { return step_ / cfg_.steps_per_time_unit(); }

  bool solid(int i, int j) const { return solid_[idx(i, j)] != 0; }
  std::size_t obstacle_cell_count() const { return obstacle_cells_; }
  const std::vector<BoundaryLink>& boundary_links() const { return links_; }

  // Macroscopic fields; recomputed lazily after a step.
  double rho(int i, int j) const;
  double ux(int i, int j) const;
  double uy(int i, int j) const;
  double mean_fluid_density() const;
  double total_fluid_mass() const;

  /// Nondimensional pressure c_s^2 (rho - rho_mean) / U_mean^2 at a cell.
  double pressure_nd(int i, int j, double rho_mean) const;

  /// Momentum-exchange force over the cylinder links accumulated during the
  /// most recent step; computed from the current populations before any step.
  ForceSample forces() const;

  /// Per-step mass injected at the fluid side of the jet links, split by jet,
  /// for a signed nondimensional jet velocity.
  std::pair<double, double> jet_link_mass_fluxes(double v_signed_nd) const;

  /// Fluid cells adjacent to the cylinder surface, sorted by azimuth.
  const std::vector<std::pair<double, int>>& surface_cells() const { return surface_cells_; }

  // Snapshot I/O (versioned little-endian binary record).
  void save_snapshot(const std::string& path) const;
  static LatticeField load_snapshot(const std::string& path);

  // Raw state access (tests, snapshots).
  std::span<const double> distributions() const { return f_; }
  std::span<double> mutable_distributions();
  int idx(int i, int j) const { return j * nx_ + i; }

 private:
  void build_obstacle();
  void build_links();
  void init_equilibrium();
  void refresh_macros() const;
  double inlet_ramp() const;
  double inlet_ux(int j) const;
  void apply_inlet(std::vector<double>& dst) const;
  void apply_outlet(std::vector<double>& dst) const;

  FlowConfig cfg_;
  actuation::JetConfig jet_cfg_;
  int nx_ = 0;
  int ny_ = 0;
  long step_ = 0;
  std::vector<double> f_;      // ncells * 9, AoS
  std::vector<double> f_tmp_;
  mutable std::vector<double> rho_, ux_, uy_;
  mutable bool macros_dirty_ = false;
  std::vector<std::uint8_t> solid_;
  std::vector<std::uint8_t> interior_;  // fast-path flag: all neighbors plain fluid
  std::vector<BoundaryLink> links_;
  std::vector<std::pair<double, int>> surface_cells_;
  std::size_t obstacle_cells_ = 0;
  double force_x_ = 0.0;  // lattice units, momentum exchange of last step
  double force_y_ = 0.0;
  bool has_stepped_ = false;

  friend LatticeField load_snapshot_impl(const std::string&);
};

}  // namespace flowrl::flow
