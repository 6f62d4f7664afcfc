#include "flowrl/flow/forces.hpp"

#include <algorithm>
#include <cmath>

#include "flowrl/errors.hpp"

namespace flowrl::flow {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Bilinearly interpolates a cell-sampled quantity at node coordinates (x, y),
// skipping solid cells and renormalizing the weights.
template <typename Getter>
double interp_fluid(const LatticeField& field, double x, double y, Getter get) {
  const int i0 = static_cast<int>(std::floor(x));
  const int j0 = static_cast<int>(std::floor(y));
  const double ax = x - i0;
  const double ay = y - j0;
  const double w[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
  const int di[4] = {0, 1, 0, 1};
  const int dj[4] = {0, 0, 1, 1};
  double sum = 0.0, wsum = 0.0;
  for (int q = 0; q < 4; ++q) {
    const int i = i0 + di[q];
    const int j = j0 + dj[q];
    if (i < 0 || i >= field.nx() || j < 0 || j >= field.ny()) continue;
    if (field.solid(i, j)) continue;
    sum += w[q] * get(i, j);
    wsum += w[q];
  }
  if (wsum <= 0.0) throw EstimationError("field interpolation landed inside the obstacle");
  return sum / wsum;
}
}  // namespace

ForceSample compute_forces(const LatticeField& field) { return field.forces(); }

double surface_pressure(const LatticeField& field, double theta_deg) {
  return surface_pressure(field, theta_deg, field.mean_fluid_density());
}

double surface_pressure(const LatticeField& field, double theta_deg, double rho_mean) {
  const auto& cells = field.surface_cells();
  if (cells.empty()) throw ConfigError("surface_pressure: no cylinder in this configuration");
  double theta = std::fmod(theta_deg, 360.0);
  if (theta < 0.0) theta += 360.0;

  // Nearest azimuth with wraparound on the sorted surface-cell ring.
  auto it = std::lower_bound(cells.begin(), cells.end(), std::make_pair(theta, 0));
  double best_gap = 361.0;
  int best_idx = -1;
  auto consider = [&](const std::pair<double, int>& c) {
    double gap = std::abs(c.first - theta);
    gap = std::min(gap, 360.0 - gap);
    if (gap < best_gap) {
      best_gap = gap;
      best_idx = c.second;
    }
  };
  if (it != cells.end()) consider(*it);
  if (it != cells.begin()) consider(*(it - 1));
  consider(cells.front());
  consider(cells.back());

  const int i = best_idx % field.nx();
  const int j = best_idx / field.nx();
  return field.pressure_nd(i, j, rho_mean);
}

namespace {

// Wall pressure and tangential viscous stress at one point near the surface,
// from bilinearly interpolated populations. The viscous stress comes from the
// nonequilibrium second moment, sigma = -(1 - 1/(2 tau)) sum f_neq c c, which
// avoids differentiating the velocity field near the staircase wall.
struct WallSample {
  double p = 0.0;    // lattice-units gauge pressure
  double tau_t = 0.0;  // tangential traction t . sigma . n
};

WallSample sample_stresses(const LatticeField& field, double x, double y, double rho_mean,
                           double nx_dir, double ny_dir, double tx_dir, double ty_dir) {
  double f[kQ];
  for (int k = 0; k < kQ; ++k) {
    f[k] = interp_fluid(field, x, y, [&](int i, int j) {
      return field.distributions()[static_cast<std::size_t>(field.idx(i, j)) * kQ + k];
    });
  }
  double rho = 0.0, jx = 0.0, jy = 0.0;
  for (int k = 0; k < kQ; ++k) {
    rho += f[k];
    jx += f[k] * kCx[k];
    jy += f[k] * kCy[k];
  }
  const double ux = jx / rho, uy = jy / rho;
  const double u2 = ux * ux + uy * uy;
  double pi_xx = 0.0, pi_xy = 0.0, pi_yy = 0.0;
  for (int k = 0; k < kQ; ++k) {
    const double cu = kCx[k] * ux + kCy[k] * uy;
    const double feq = kWeight[k] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * u2);
    const double fneq = f[k] - feq;
    pi_xx += fneq * kCx[k] * kCx[k];
    pi_xy += fneq * kCx[k] * kCy[k];
    pi_yy += fneq * kCy[k] * kCy[k];
  }
  const double coeff = -(1.0 - 0.5 / field.config().tau());
  const double s_xx = coeff * pi_xx;
  const double s_xy = coeff * pi_xy;
  const double s_yy = coeff * pi_yy;

  WallSample out;
  out.p = kCs2 * (rho - rho_mean);
  out.tau_t = tx_dir * (s_xx * nx_dir + s_xy * ny_dir) +
              ty_dir * (s_xy * nx_dir + s_yy * ny_dir);
  return out;
}

}  // namespace

DragSplit decompose_drag(const LatticeField& field) {
  const FlowConfig& cfg = field.config();
  if (!cfg.with_cylinder) return {};

  const double rho_mean = field.mean_fluid_density();
  const double radius = cfg.radius_lu();
  const double ccx = cfg.cylinder_cx();
  const double ccy = cfg.cylinder_cy();
  const double u_mean = cfg.mean_u_lb();

  // Quadratic extrapolation to the wall from three rings clear of the
  // staircase; Lagrange weights at offset zero for offsets {1, 2, 3}.
  const double ring_off[3] = {1.0, 2.0, 3.0};
  const double lagrange[3] = {3.0, -3.0, 1.0};
  const int n_samples = std::max(720, 16 * cfg.diameter_lu);
  const double dtheta = 2.0 * kPi / n_samples;

  double f_pressure = 0.0;
  double f_friction = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double theta = (s + 0.5) * dtheta;
    // Radial direction (-cos, sin) matches the clockwise-from-windward azimuth.
    const double rx = -std::cos(theta);
    const double ry = std::sin(theta);
    const double tx = std::sin(theta);  // tangent toward increasing azimuth
    const double ty = std::cos(theta);

    double p_wall = 0.0;
    double tau_wall = 0.0;
    for (int ring = 0; ring < 3; ++ring) {
      const double r = radius + ring_off[ring];
      const WallSample w = sample_stresses(field, ccx + r * rx, ccy + r * ry, rho_mean,
                                           rx, ry, tx, ty);
      p_wall += lagrange[ring] * w.p;
      tau_wall += lagrange[ring] * w.tau_t;
    }

    const double ds = radius * dtheta;
    f_pressure += p_wall * std::cos(theta) * ds;
    f_friction += tau_wall * std::sin(theta) * ds;
  }

  const double denom = 0.5 * 1.0 * u_mean * u_mean * cfg.diameter_lu;
  return DragSplit{f_pressure / denom, f_friction / denom};
}

}  // namespace flowrl::flow
