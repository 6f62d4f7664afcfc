#pragma once

#include <span>
#include <vector>

namespace flowrl::analysis {

double mean_of(std::span<const double> v);
double std_of(std::span<const double> v);  ///< population convention

/// Per-episode mean and spread across repeated training runs, plus a trailing
/// moving average of the mean curve. Records of unequal length truncate to
/// the shortest.
struct LearningCurves {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> smoothed;  ///< trailing moving average of `mean`
};

LearningCurves aggregate_learning_curves(std::span<const std::vector<double>> records,
                                         int smooth_window = 10);

/// Trailing-window statistics of a force trace.
struct TraceSummary {
  double mean_cd = 0.0;
  double std_cd = 0.0;
  double std_cl = 0.0;
  double reduction_pct = 0.0;  ///< drag reduction vs the supplied baseline
};

TraceSummary summarize(std::span<const double> cd, std::span<const double> cl,
                       std::size_t window, double baseline_cd);

}  // namespace flowrl::analysis
