#include "flowrl/analysis/stats.hpp"

#include <algorithm>
#include <cmath>

#include "flowrl/errors.hpp"

namespace flowrl::analysis {

double mean_of(std::span<const double> v) {
  if (v.empty()) throw ConfigError("mean_of: empty input");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(std::span<const double> v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

LearningCurves aggregate_learning_curves(std::span<const std::vector<double>> records,
                                         int smooth_window) {
  if (records.empty()) throw ConfigError("aggregate_learning_curves: no records");
  std::size_t n = records.front().size();
  for (const auto& r : records) n = std::min(n, r.size());

  LearningCurves out;
  out.mean.resize(n);
  out.stddev.resize(n);
  out.smoothed.resize(n);
  std::vector<double> column(records.size());
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t r = 0; r < records.size(); ++r) column[r] = records[r][e];
    out.mean[e] = mean_of(column);
    out.stddev[e] = std_of(column);
  }
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t lo = e + 1 >= static_cast<std::size_t>(smooth_window)
                               ? e + 1 - smooth_window
                               : 0;
    out.smoothed[e] = mean_of(std::span(out.mean).subspan(lo, e - lo + 1));
  }
  return out;
}

TraceSummary summarize(std::span<const double> cd, std::span<const double> cl,
                       std::size_t window, double baseline_cd) {
  if (cd.size() != cl.size()) throw ConfigError("summarize: trace length mismatch");
  if (window == 0 || window > cd.size())
    throw ConfigError("summarize: window must fit inside the trace");
  const auto tail_cd = cd.subspan(cd.size() - window);
  const auto tail_cl = cl.subspan(cl.size() - window);
  TraceSummary s;
  s.mean_cd = mean_of(tail_cd);
  s.std_cd = std_of(tail_cd);
  s.std_cl = std_of(tail_cl);
  s.reduction_pct = baseline_cd != 0.0 ? 100.0 * (baseline_cd - s.mean_cd) / baseline_cd : 0.0;
  return s;
}

}  // namespace flowrl::analysis
