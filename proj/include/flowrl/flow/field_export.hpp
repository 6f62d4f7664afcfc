#pragma once

#include <string>

#include "flowrl/flow/lattice.hpp"

namespace flowrl::flow {

/// Writes the full field as CSV rows `x,y,u,v,p,vorticity` in diameter units,
/// with velocities in units of the mean inlet speed. Solid cells are skipped.
void export_field_csv(const LatticeField& field, const std::string& path);

}  // namespace flowrl::flow
