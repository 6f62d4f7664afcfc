#pragma once

#include <utility>

#include "flowrl/flow/lattice.hpp"

namespace flowrl::flow {

/// Momentum-exchange drag and lift coefficients (normalized by 1/2 rho U^2 D).
ForceSample compute_forces(const LatticeField& field);

/// Nondimensional surface pressure at the fluid cell closest to the cylinder
/// surface at the given azimuth (degrees, clockwise from the windward point).
double surface_pressure(const LatticeField& field, double theta_deg);
double surface_pressure(const LatticeField& field, double theta_deg, double rho_mean);

struct DragSplit {
  double pressure = 0.0;  ///< coefficient units, like ForceSample::cd
  double friction = 0.0;
  double pressure_fraction() const {
    const double total = pressure + friction;
    return total != 0.0 ? pressure / total : 0.0;
  }
};

/// Splits the drag into surface-pressure and skin-friction integrals sampled
/// just off the cylinder wall.
DragSplit decompose_drag(const LatticeField& field);

}  // namespace flowrl::flow
