#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "flowrl/flow/config.hpp"
#include "flowrl/flow/lattice.hpp"

using namespace flowrl;

TEST_CASE("plain channel converges to the analytic parabolic profile") {
  flow::FlowConfig cfg;
  cfg.with_cylinder = false;
  cfg.diameter_lu = 10;  // 220 x 41 channel
  cfg.u_max_lb = 0.08;
  cfg.reynolds = 10.0;   // strongly viscous: fast relaxation to steady state
  cfg.ramp_time_units = 0.0;
  cfg.init_from_inlet_profile = true;
  flow::LatticeField field(cfg);

  for (int s = 0; s < 12000; ++s) field.step_uncontrolled();

  // Compare the velocity profile against the imposed parabola at several
  // stations along the channel.
  const double h = cfg.ny();
  for (int i : {40, 110, 180}) {
    double err2 = 0.0, ref2 = 0.0;
    for (int j = 0; j < field.ny(); ++j) {
      const double y = j + 0.5;
      const double analytic = 4.0 * cfg.u_max_lb * y * (h - y) / (h * h);
      const double got = field.ux(i, j);
      err2 += (got - analytic) * (got - analytic);
      ref2 += analytic * analytic;
      CHECK(std::abs(field.uy(i, j)) < 1e-4);
    }
    const double rel_l2 = std::sqrt(err2 / ref2);
    CHECK(rel_l2 < 0.01);
  }
}

TEST_CASE("steady channel holds its mass within 1e-6 per thousand steps") {
  flow::FlowConfig cfg;
  cfg.with_cylinder = false;
  cfg.diameter_lu = 10;
  cfg.u_max_lb = 0.08;
  cfg.reynolds = 10.0;
  cfg.ramp_time_units = 0.0;
  cfg.init_from_inlet_profile = true;
  flow::LatticeField field(cfg);
  // Equilibrate past the viscous timescale H^2/nu (~32k steps) so the density
  // field has settled; after that, inflow and outflow balance exactly.
  for (int s = 0; s < 40000; ++s) field.step_uncontrolled();

  const double before = field.total_fluid_mass();
  for (int s = 0; s < 1000; ++s) field.step_uncontrolled();
  const double after = field.total_fluid_mass();
  CHECK(std::abs(after - before) / before < 1e-6);
}
