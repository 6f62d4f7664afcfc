#pragma once

#include <span>

namespace flowrl::flow {

/// Dominant nondimensional frequency of a uniformly sampled series via a
/// direct spectral scan with local refinement. With lift sampled in units of
/// D/U_mean the returned frequency is the Strouhal number.
///
/// Requires at least ten cycles of the dominant component in the window and a
/// peak that clearly exceeds the spectral noise floor; otherwise throws
/// EstimationError.
double dominant_frequency(std::span<const double> series, double dt_time_units);

}  // namespace flowrl::flow
