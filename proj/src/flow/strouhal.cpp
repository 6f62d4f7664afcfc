#include "flowrl/flow/strouhal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "flowrl/errors.hpp"

namespace flowrl::flow {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Power of the demeaned series at one frequency (direct transform).
double power_at(std::span<const double> x, double dt, double freq, double mean) {
  double re = 0.0, im = 0.0;
  const double w = 2.0 * kPi * freq * dt;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double v = x[n] - mean;
    re += v * std::cos(w * n);
    im -= v * std::sin(w * n);
  }
  const double norm = static_cast<double>(x.size());
  return (re * re + im * im) / (norm * norm);
}
}  // namespace

double dominant_frequency(std::span<const double> series, double dt_time_units) {
  if (series.size() < 32 || dt_time_units <= 0.0)
    throw EstimationError("dominant_frequency: series too short");
  const double span = dt_time_units * static_cast<double>(series.size());

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(series.size());
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= static_cast<double>(series.size());
  if (var <= 1e-24) throw EstimationError("dominant_frequency: series has no variation");

  // A valid peak needs at least ten cycles inside the window.
  const double f_lo = 10.0 / span;
  const double f_hi = 0.5 / dt_time_units;  // Nyquist
  if (f_lo >= f_hi) throw EstimationError("dominant_frequency: window too short");

  // Coarse scan at four times the Fourier resolution.
  const double df = 0.25 / span;
  std::vector<double> powers;
  double best_f = f_lo, best_p = -1.0;
  for (double f = f_lo; f <= f_hi; f += df) {
    const double p = power_at(series, dt_time_units, f, mean);
    powers.push_back(p);
    if (p > best_p) {
      best_p = p;
      best_f = f;
    }
  }
  std::vector<double> sorted = powers;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double floor = sorted[sorted.size() / 2];
  if (best_p < 10.0 * floor || best_p <= 0.0)
    throw EstimationError("dominant_frequency: no spectral peak above the noise floor");

  // Ternary-search refinement around the coarse peak.
  double lo = std::max(f_lo, best_f - df);
  double hi = std::min(f_hi, best_f + df);
  for (int iter = 0; iter < 60; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (power_at(series, dt_time_units, m1, mean) <
        power_at(series, dt_time_units, m2, mean))
      lo = m1;
    else
      hi = m2;
  }
  return 0.5 * (lo + hi);
}

}  // namespace flowrl::flow
