#pragma once

#include <span>
#include <vector>

namespace flowrl::sensing {

/// Floor applied to the standard deviation so constant channels map to zero.
inline constexpr double kStdFloor = 1e-8;

/// Causal z-score of the newest sample: statistics are taken over the
/// trailing `window` samples of the series (including the newest one).
double standardize_last(std::span<const double> series, int window);

/// Causal z-score of every sample of a series, each against its own trailing
/// window. Output length equals input length.
std::vector<double> standardize(std::span<const double> series, int window);

}  // namespace flowrl::sensing
