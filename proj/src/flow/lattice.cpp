#include "flowrl/flow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "flowrl/errors.hpp"

namespace flowrl::flow {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kRho0 = 1.0;

double azimuth_of(double dx, double dy) {
  // Clockwise from the windward point: the radial direction at azimuth a is
  // (-cos a, sin a).
  double a = std::atan2(dy, -dx) * 180.0 / kPi;
  if (a < 0.0) a += 360.0;
  return a;
}
}  // namespace

LatticeField::LatticeField(const FlowConfig& cfg, const actuation::JetConfig& jets)
    : cfg_(cfg), jet_cfg_(jets) {
  cfg_.validate();
  jet_cfg_.validate();
  nx_ = cfg_.nx();
  ny_ = cfg_.ny();
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  f_.assign(n * kQ, 0.0);
  f_tmp_.assign(n * kQ, 0.0);
  rho_.assign(n, kRho0);
  ux_.assign(n, 0.0);
  uy_.assign(n, 0.0);
  solid_.assign(n, 0);
  build_obstacle();
  build_links();
  init_equilibrium();
}

void LatticeField::build_obstacle() {
  obstacle_cells_ = 0;
  if (!cfg_.with_cylinder) return;
  const double cx = cfg_.cylinder_cx();
  const double cy = cfg_.cylinder_cy();
  double mask_radius = cfg_.radius_lu();
  if (const char* env = std::getenv("FLOWRL_MASK_OFFSET")) mask_radius += std::atof(env);
  const double r2 = mask_radius * mask_radius;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const double dx = i - cx;
      const double dy = j - cy;
      if (dx * dx + dy * dy <= r2) {
        solid_[idx(i, j)] = 1;
        ++obstacle_cells_;
      }
    }
  }
}

void LatticeField::build_links() {
  links_.clear();
  surface_cells_.clear();
  interior_.assign(solid_.size(), 0);
  const double ccx = cfg_.cylinder_cx();
  const double ccy = cfg_.cylinder_cy();

  const double radius = cfg_.radius_lu();
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (solid_[idx(i, j)]) continue;
      bool interior = i > 0 && i < nx_ - 1 && j > 0 && j < ny_ - 1;
      bool touches_cylinder = false;
      for (int k = 1; k < kQ; ++k) {
        const int in = i + kCx[k];
        const int jn = j + kCy[k];
        if (in < 0 || in >= nx_ || jn < 0 || jn >= ny_) {
          interior = false;
          continue;
        }
        if (!solid_[idx(in, jn)]) continue;
        interior = false;
        touches_cylinder = true;

        BoundaryLink link{};
        link.fluid_idx = idx(i, j);
        link.dir = static_cast<std::uint8_t>(k);

        // Exact intersection of the link with the cylinder circle:
        // |d + t c|^2 = R^2 with d the fluid node offset from the center.
        const double dxn = i - ccx;
        const double dyn = j - ccy;
        const double a = kCx[k] * kCx[k] + kCy[k] * kCy[k];
        const double b = 2.0 * (dxn * kCx[k] + dyn * kCy[k]);
        const double c0 = dxn * dxn + dyn * dyn - radius * radius;
        const double disc = std::max(b * b - 4.0 * a * c0, 0.0);
        double t = (-b - std::sqrt(disc)) / (2.0 * a);
        link.q = std::clamp(t, 1e-6, 1.0);
        link.wall_x = i + link.q * kCx[k];
        link.wall_y = j + link.q * kCy[k];

        // Fluid node one further step away from the wall, for the q < 1/2
        // interpolation branch.
        const int ia = i - kCx[k];
        const int ja = j - kCy[k];
        link.away_idx = -1;
        if (ia >= 0 && ia < nx_ && ja >= 0 && ja < ny_ && !solid_[idx(ia, ja)])
          link.away_idx = idx(ia, ja);

        const double dx = link.wall_x - ccx;
        const double dy = link.wall_y - ccy;
        link.azimuth_deg = azimuth_of(dx, dy);
        link.jet = -1;
        link.profile = 0.0;
        link.uw_x = link.uw_y = link.jet_corr = 0.0;

        double prof = actuation::arc_profile(link.azimuth_deg, jet_cfg_.center_top_deg,
                                             jet_cfg_.width_deg);
        double sign = 1.0;
        int jet = prof > 0.0 ? 0 : -1;
        if (jet < 0) {
          prof = actuation::arc_profile(link.azimuth_deg, jet_cfg_.center_bottom_deg,
                                        jet_cfg_.width_deg);
          if (prof > 0.0) {
            jet = 1;
            sign = -1.0;
          }
        }
        if (jet >= 0) {
          const double norm = std::sqrt(dx * dx + dy * dy);
          link.jet = jet;
          link.profile = prof;
          link.uw_x = sign * prof * dx / norm;
          link.uw_y = sign * prof * dy / norm;
          const bool low_q = link.q < 0.5 && link.away_idx >= 0;
          const double wall_coeff = low_q ? 6.0 : 3.0 / std::max(link.q, 0.5);
          link.jet_corr =
              wall_coeff * kWeight[k] * (kCx[k] * link.uw_x + kCy[k] * link.uw_y);
        }
        links_.push_back(link);
      }
      if (interior) interior_[idx(i, j)] = 1;
      if (touches_cylinder) {
        surface_cells_.emplace_back(azimuth_of(i - ccx, j - ccy), idx(i, j));
      }
    }
  }
  std::sort(surface_cells_.begin(), surface_cells_.end());

  if (cfg_.with_cylinder) {
    int top = 0, bottom = 0;
    for (const auto& l : links_) {
      if (l.jet == 0) ++top;
      if (l.jet == 1) ++bottom;
    }
    if (top == 0 || bottom == 0) {
      std::ostringstream err;
      err << "jet arcs are unresolved at diameter_lu = " << cfg_.diameter_lu
          << " (top links " << top << ", bottom links " << bottom << ")";
      throw ConfigError(err.str());
    }
  }
}

void LatticeField::init_equilibrium() {
  std::fill(rho_.begin(), rho_.end(), kRho0);
  std::fill(ux_.begin(), ux_.end(), 0.0);
  std::fill(uy_.begin(), uy_.end(), 0.0);
  if (cfg_.init_from_inlet_profile && !cfg_.closed_box) {
    for (int j = 0; j < ny_; ++j) {
      const double u = inlet_velocity(cfg_, static_cast<double>(j));
      for (int i = 0; i < nx_; ++i)
        if (!solid_[idx(i, j)]) ux_[idx(i, j)] = u;
    }
  }
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const std::size_t c = idx(i, j);
      const double u = ux_[c];
      const double c15 = 1.0 - 1.5 * u * u;
      for (int k = 0; k < kQ; ++k) {
        const double cu = 3.0 * kCx[k] * u;
        f_[c * kQ + k] = kWeight[k] * kRho0 * (c15 + cu + 0.5 * cu * cu);
      }
    }
  }
  macros_dirty_ = false;
}

double LatticeField::inlet_ramp() const {
  const double ramp_steps = cfg_.ramp_time_units * cfg_.steps_per_time_unit();
  if (ramp_steps <= 0.0 || step_ >= ramp_steps) return 1.0;
  const double x = step_ / ramp_steps;
  return x * x * (3.0 - 2.0 * x);
}

double LatticeField::inlet_ux(int j) const {
  return inlet_ramp() * inlet_velocity(cfg_, static_cast<double>(j));
}

void LatticeField::step(const actuation::JetState& jets) {
  const double omega = 1.0 / cfg_.tau();
  const double one_minus_omega = 1.0 - omega;
  const double v_lat = jets.v() * cfg_.mean_u_lb();

  std::vector<double>& dst = f_tmp_;
  const std::vector<double>& src = f_;
  double fx = 0.0, fy = 0.0;
  long bad_cell = -1;

  for (int j = 0; j < ny_; ++j) {
    const int row = j * nx_;
    for (int i = 0; i < nx_; ++i) {
      const int c = row + i;
      if (solid_[c]) continue;
      const double* fc = &src[static_cast<std::size_t>(c) * kQ];
      const double f0 = fc[0], f1 = fc[1], f2 = fc[2], f3 = fc[3], f4 = fc[4];
      const double f5 = fc[5], f6 = fc[6], f7 = fc[7], f8 = fc[8];

      const double rho = f0 + f1 + f2 + f3 + f4 + f5 + f6 + f7 + f8;
      const double inv_rho = 1.0 / rho;
      const double vx = (f1 - f3 + f5 - f6 - f7 + f8) * inv_rho;
      const double vy = (f2 - f4 + f5 + f6 - f7 - f8) * inv_rho;
      rho_[c] = rho;
      ux_[c] = vx;
      uy_[c] = vy;
      const double u2 = vx * vx + vy * vy;
      if (!(rho > 0.0) || u2 >= kCs2 || !std::isfinite(u2)) bad_cell = c;

      // BGK collision against the quadratic equilibrium.
      const double c15u2 = 1.0 - 1.5 * u2;
      const double wr_ax = kWeight[1] * rho;   // axis weight * rho
      const double wr_dg = kWeight[5] * rho;   // diagonal weight * rho
      const double wr_0 = kWeight[0] * rho;
      const double tx = 3.0 * vx, ty = 3.0 * vy;
      const double txx = 4.5 * vx * vx, tyy = 4.5 * vy * vy;
      const double txy = 9.0 * vx * vy;

      double fs[kQ];
      fs[0] = one_minus_omega * f0 + omega * wr_0 * c15u2;
      fs[1] = one_minus_omega * f1 + omega * wr_ax * (c15u2 + tx + txx);
      fs[2] = one_minus_omega * f2 + omega * wr_ax * (c15u2 + ty + tyy);
      fs[3] = one_minus_omega * f3 + omega * wr_ax * (c15u2 - tx + txx);
      fs[4] = one_minus_omega * f4 + omega * wr_ax * (c15u2 - ty + tyy);
      fs[5] = one_minus_omega * f5 + omega * wr_dg * (c15u2 + tx + ty + txx + tyy + txy);
      fs[6] = one_minus_omega * f6 + omega * wr_dg * (c15u2 - tx + ty + txx + tyy - txy);
      fs[7] = one_minus_omega * f7 + omega * wr_dg * (c15u2 - tx - ty + txx + tyy + txy);
      fs[8] = one_minus_omega * f8 + omega * wr_dg * (c15u2 + tx - ty + txx + tyy - txy);

      double* dc = &dst[static_cast<std::size_t>(c) * kQ];
      if (interior_[c]) {
        dc[0] = fs[0];
        dst[static_cast<std::size_t>(c + 1) * kQ + 1] = fs[1];
        dst[static_cast<std::size_t>(c + nx_) * kQ + 2] = fs[2];
        dst[static_cast<std::size_t>(c - 1) * kQ + 3] = fs[3];
        dst[static_cast<std::size_t>(c - nx_) * kQ + 4] = fs[4];
        dst[static_cast<std::size_t>(c + nx_ + 1) * kQ + 5] = fs[5];
        dst[static_cast<std::size_t>(c + nx_ - 1) * kQ + 6] = fs[6];
        dst[static_cast<std::size_t>(c - nx_ - 1) * kQ + 7] = fs[7];
        dst[static_cast<std::size_t>(c - nx_ + 1) * kQ + 8] = fs[8];
        continue;
      }

      dc[0] = fs[0];
      for (int k = 1; k < kQ; ++k) {
        const int in = i + kCx[k];
        const int jn = j + kCy[k];
        if (jn < 0 || jn >= ny_) {
          // Channel wall: plain half-way bounce-back.
          dc[kOpp[k]] = fs[k];
        } else if (in < 0 || in >= nx_) {
          if (cfg_.closed_box) {
            dc[kOpp[k]] = fs[k];
          }
          // Otherwise the inlet/outlet passes rebuild these populations.
        } else if (solid_[row + kCy[k] * nx_ + in]) {
          // Cylinder links are resolved by the interpolated boundary pass.
          continue;
        } else {
          dst[static_cast<std::size_t>(jn * nx_ + in) * kQ + k] = fs[k];
        }
      }
    }
  }

  // Interpolated (linear) bounce-back on the cylinder links, with the
  // moving-wall term on the jet arcs, plus momentum-exchange accumulation.

  auto post_collision = [&](int cell, double out[kQ]) {
    const double* fc = &src[static_cast<std::size_t>(cell) * kQ];
    const double rho = fc[0] + fc[1] + fc[2] + fc[3] + fc[4] + fc[5] + fc[6] + fc[7] + fc[8];
    const double inv_rho = 1.0 / rho;
    const double vx = (fc[1] - fc[3] + fc[5] - fc[6] - fc[7] + fc[8]) * inv_rho;
    const double vy = (fc[2] - fc[4] + fc[5] + fc[6] - fc[7] - fc[8]) * inv_rho;
    const double u2 = vx * vx + vy * vy;
    for (int k = 0; k < kQ; ++k) {
      const double cu = kCx[k] * vx + kCy[k] * vy;
      const double feq = kWeight[k] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * u2);
      out[k] = fc[k] + omega * (feq - fc[k]);
    }
  };
  double fs_cell[kQ], fs_away[kQ];
  int cached_cell = -1;
  for (const BoundaryLink& l : links_) {
    if (l.fluid_idx != cached_cell) {
      post_collision(l.fluid_idx, fs_cell);
      cached_cell = l.fluid_idx;
    }
    const int k = l.dir;
    const int ko = kOpp[k];
    double reflected;
    if (l.q < 0.5 && l.away_idx >= 0) {
      post_collision(l.away_idx, fs_away);
      reflected = 2.0 * l.q * fs_cell[k] + (1.0 - 2.0 * l.q) * fs_away[k];
    } else {
      const double q = std::max(l.q, 0.5);
      reflected = fs_cell[k] / (2.0 * q) + (2.0 * q - 1.0) / (2.0 * q) * fs_cell[ko];
    }
    if (l.jet >= 0 && v_lat != 0.0) reflected -= l.jet_corr * v_lat * kRho0;
    dst[static_cast<std::size_t>(l.fluid_idx) * kQ + ko] = reflected;
    // Momentum exchange: flux into the wall minus the reflected flux.
    fx += kCx[k] * (fs_cell[k] + reflected);
    fy += kCy[k] * (fs_cell[k] + reflected);
  }

  if (!cfg_.closed_box) {
    apply_inlet(dst);
    apply_outlet(dst);
  }

  f_.swap(f_tmp_);
  force_x_ = fx;
  force_y_ = fy;
  has_stepped_ = true;
  ++step_;
  macros_dirty_ = true;

  if (bad_cell >= 0) {
    std::ostringstream err;
    err << "solver diverged at step " << step_ << " (cell " << bad_cell << ")";
    throw DivergenceError(step_, err.str());
  }
}

void LatticeField::step_uncontrolled() {
  static const actuation::JetState quiet{};
  step(quiet);
}

void LatticeField::apply_inlet(std::vector<double>& dst) const {
  for (int j = 0; j < ny_; ++j) {
    double* fc = &dst[static_cast<std::size_t>(idx(0, j)) * kQ];
    const double u_in = inlet_ux(j);
    if (j == 0 || j == ny_ - 1) {
      // Corner nodes: equilibrium with the neighbor density.
      const double* fn = &dst[static_cast<std::size_t>(idx(1, j)) * kQ];
      double rho_n = 0.0;
      for (int k = 0; k < kQ; ++k) rho_n += fn[k];
      const double c15 = 1.0 - 1.5 * u_in * u_in;
      for (int k = 0; k < kQ; ++k) {
        const double cu = 3.0 * kCx[k] * u_in;
        fc[k] = kWeight[k] * rho_n * (c15 + cu + 0.5 * cu * cu);
      }
      continue;
    }
    // Zou-He velocity inlet for the unknown east-moving populations.
    const double rho =
        (fc[0] + fc[2] + fc[4] + 2.0 * (fc[3] + fc[6] + fc[7])) / (1.0 - u_in);
    fc[1] = fc[3] + (2.0 / 3.0) * rho * u_in;
    fc[5] = fc[7] - 0.5 * (fc[2] - fc[4]) + (1.0 / 6.0) * rho * u_in;
    fc[8] = fc[6] + 0.5 * (fc[2] - fc[4]) + (1.0 / 6.0) * rho * u_in;
  }
}

void LatticeField::apply_outlet(std::vector<double>& dst) const {
  for (int j = 0; j < ny_; ++j) {
    double* fc = &dst[static_cast<std::size_t>(idx(nx_ - 1, j)) * kQ];
    const double* fn = &dst[static_cast<std::size_t>(idx(nx_ - 2, j)) * kQ];
    // Zero-gradient extrapolation of the west-moving populations, then pin
    // the density to the reference so the outlet holds constant pressure.
    fc[3] = fn[3];
    fc[6] = fn[6];
    fc[7] = fn[7];
    double rho = 0.0;
    for (int k = 0; k < kQ; ++k) rho += fc[k];
    const double scale = kRho0 / rho;
    for (int k = 0; k < kQ; ++k) fc[k] *= scale;
  }
}

void LatticeField::refresh_macros() const {
  if (!macros_dirty_) return;
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  for (std::size_t c = 0; c < n; ++c) {
    if (solid_[c]) continue;
    const double* fc = &f_[c * kQ];
    const double rho = fc[0] + fc[1] + fc[2] + fc[3] + fc[4] + fc[5] + fc[6] + fc[7] + fc[8];
    rho_[c] = rho;
    ux_[c] = (fc[1] - fc[3] + fc[5] - fc[6] - fc[7] + fc[8]) / rho;
    uy_[c] = (fc[2] - fc[4] + fc[5] + fc[6] - fc[7] - fc[8]) / rho;
  }
  macros_dirty_ = false;
}

double LatticeField::rho(int i, int j) const {
  refresh_macros();
  return rho_[idx(i, j)];
}

double LatticeField::ux(int i, int j) const {
  refresh_macros();
  return ux_[idx(i, j)];
}

double LatticeField::uy(int i, int j) const {
  refresh_macros();
  return uy_[idx(i, j)];
}

double LatticeField::mean_fluid_density() const {
  refresh_macros();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < rho_.size(); ++c) {
    if (solid_[c]) continue;
    sum += rho_[c];
    ++count;
  }
  return sum / static_cast<double>(count);
}

double LatticeField::total_fluid_mass() const {
  double sum = 0.0;
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  for (std::size_t c = 0; c < n; ++c) {
    if (solid_[c]) continue;
    const double* fc = &f_[c * kQ];
    for (int k = 0; k < kQ; ++k) sum += fc[k];
  }
  return sum;
}

double LatticeField::pressure_nd(int i, int j, double rho_mean) const {
  refresh_macros();
  const double u_mean = cfg_.mean_u_lb();
  return kCs2 * (rho_[idx(i, j)] - rho_mean) / (kRho0 * u_mean * u_mean);
}

ForceSample LatticeField::forces() const {
  double fx = force_x_, fy = force_y_;
  if (!has_stepped_) {
    // No collision has happened yet: evaluate the momentum exchange on the
    // current populations (exact for equilibrium states).
    fx = fy = 0.0;
    for (const BoundaryLink& l : links_) {
      const double fv = f_[static_cast<std::size_t>(l.fluid_idx) * kQ + l.dir];
      fx += 2.0 * kCx[l.dir] * fv;
      fy += 2.0 * kCy[l.dir] * fv;
    }
  }
  const double u = cfg_.mean_u_lb();
  const double denom = 0.5 * kRho0 * u * u * cfg_.diameter_lu;
  return ForceSample{time_units(), fx / denom, fy / denom};
}

std::pair<double, double> LatticeField::jet_link_mass_fluxes(double v_signed_nd) const {
  const double v_lat = v_signed_nd * cfg_.mean_u_lb();
  double top = 0.0, bottom = 0.0;
  for (const BoundaryLink& l : links_) {
    if (l.jet < 0) continue;
    const double injected = -l.jet_corr * v_lat * kRho0;
    if (l.jet == 0)
      top += injected;
    else
      bottom += injected;
  }
  return {top, bottom};
}

std::span<double> LatticeField::mutable_distributions() {
  macros_dirty_ = true;
  has_stepped_ = false;
  return f_;
}

}  // namespace flowrl::flow
