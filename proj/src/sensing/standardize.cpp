#include "flowrl/sensing/standardize.hpp"

#include <algorithm>
#include <cmath>

#include "flowrl/errors.hpp"

namespace flowrl::sensing {

namespace {
double z_score_at(std::span<const double> series, std::size_t pos, int window) {
  const std::size_t lo = pos + 1 >= static_cast<std::size_t>(window) ? pos + 1 - window : 0;
  const std::size_t n = pos - lo + 1;
  double mean = 0.0;
  for (std::size_t k = lo; k <= pos; ++k) mean += series[k];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t k = lo; k <= pos; ++k) {
    const double d = series[k] - mean;
    var += d * d;
  }
  const double sd = std::sqrt(var / static_cast<double>(n));
  return (series[pos] - mean) / std::max(sd, kStdFloor);
}
}  // namespace

double standardize_last(std::span<const double> series, int window) {
  if (window < 2) throw ConfigError("standardize: window must span at least 2 samples");
  if (series.empty()) throw ConfigError("standardize: empty series");
  return z_score_at(series, series.size() - 1, window);
}

std::vector<double> standardize(std::span<const double> series, int window) {
  if (window < 2) throw ConfigError("standardize: window must span at least 2 samples");
  std::vector<double> out(series.size());
  for (std::size_t pos = 0; pos < series.size(); ++pos)
    out[pos] = z_score_at(series, pos, window);
  return out;
}

}  // namespace flowrl::sensing
