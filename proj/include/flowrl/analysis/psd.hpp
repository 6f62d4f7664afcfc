#pragma once

#include <span>
#include <vector>

namespace flowrl::analysis {

/// One-sided Welch power spectral density (density convention: integrating
/// power over frequency recovers the series variance).
struct PsdResult {
  std::vector<double> frequency;  ///< ascending, nondimensional
  std::vector<double> power;      ///< >= 0
  int segment_length = 0;
  double overlap = 0.5;
  double dt = 0.0;

  /// Peak power within [f_lo, f_hi].
  double peak_in_band(double f_lo, double f_hi) const;
};

/// Welch estimate with Hann-windowed segments (default 256) at 50% overlap;
/// each segment is demeaned. Requires at least one full segment of samples.
PsdResult welch_psd(std::span<const double> series, double dt, int segment_length = 256);

}  // namespace flowrl::analysis
