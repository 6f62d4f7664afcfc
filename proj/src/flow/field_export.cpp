#include "flowrl/flow/field_export.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "flowrl/errors.hpp"

namespace flowrl::flow {

void export_field_csv(const LatticeField& field, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("export_field_csv: cannot write " + path);

  const FlowConfig& cfg = field.config();
  const double d = cfg.diameter_lu;
  const double u_mean = cfg.mean_u_lb();
  const double rho_mean = field.mean_fluid_density();

  out << "x,y,u,v,p,vorticity\n";
  char line[160];
  for (int j = 0; j < field.ny(); ++j) {
    for (int i = 0; i < field.nx(); ++i) {
      if (field.solid(i, j)) continue;
      // Central-difference vorticity; one-sided at domain edges and walls.
      auto uy_at = [&](int ii, int jj) { return field.solid(ii, jj) ? 0.0 : field.uy(ii, jj); };
      auto ux_at = [&](int ii, int jj) { return field.solid(ii, jj) ? 0.0 : field.ux(ii, jj); };
      const int il = std::max(i - 1, 0), ir = std::min(i + 1, field.nx() - 1);
      const int jl = std::max(j - 1, 0), jr = std::min(j + 1, field.ny() - 1);
      const double dvdx = (uy_at(ir, j) - uy_at(il, j)) / (ir - il);
      const double dudy = (ux_at(i, jr) - ux_at(i, jl)) / (jr - jl);
      // Vorticity in 1/(D/U_mean) units.
      const double vort = (dvdx - dudy) * d / u_mean;
      std::snprintf(line, sizeof(line), "%.6g,%.6g,%.8g,%.8g,%.8g,%.8g\n",
                    (i + 0.5) / d, (j + 0.5) / d, field.ux(i, j) / u_mean,
                    field.uy(i, j) / u_mean, field.pressure_nd(i, j, rho_mean), vort);
      out << line;
    }
  }
  if (!out) throw ConfigError("export_field_csv: write failed for " + path);
}

}  // namespace flowrl::flow
