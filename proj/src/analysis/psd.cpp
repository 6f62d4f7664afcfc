#include "flowrl/analysis/psd.hpp"

#include <cmath>
#include <complex>

#include "flowrl/errors.hpp"

namespace flowrl::analysis {

namespace {
constexpr double kPi = 3.14159265358979323846;

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> w_len(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= w_len;
      }
    }
  }
}
}  // namespace

double PsdResult::peak_in_band(double f_lo, double f_hi) const {
  double peak = 0.0;
  for (std::size_t k = 0; k < frequency.size(); ++k) {
    if (frequency[k] < f_lo || frequency[k] > f_hi) continue;
    peak = std::max(peak, power[k]);
  }
  return peak;
}

PsdResult welch_psd(std::span<const double> series, double dt, int segment_length) {
  if (segment_length < 8 || (segment_length & (segment_length - 1)) != 0)
    throw ConfigError("welch_psd: segment length must be a power of two >= 8");
  if (static_cast<int>(series.size()) < segment_length)
    throw EstimationError("welch_psd: series shorter than one segment");
  if (dt <= 0.0) throw ConfigError("welch_psd: dt must be positive");

  const int n = segment_length;
  const int hop = n / 2;  // 50% overlap
  const double fs = 1.0 / dt;

  std::vector<double> window(n);
  double win_power = 0.0;
  for (int k = 0; k < n; ++k) {
    window[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * k / (n - 1)));  // Hann
    win_power += window[k] * window[k];
  }

  PsdResult result;
  result.segment_length = n;
  result.dt = dt;
  result.frequency.resize(n / 2 + 1);
  result.power.assign(n / 2 + 1, 0.0);
  for (int k = 0; k <= n / 2; ++k) result.frequency[k] = fs * k / n;

  int segments = 0;
  std::vector<std::complex<double>> buf(n);
  for (std::size_t start = 0; start + n <= series.size(); start += hop) {
    double mean = 0.0;
    for (int k = 0; k < n; ++k) mean += series[start + k];
    mean /= n;
    for (int k = 0; k < n; ++k) buf[k] = {(series[start + k] - mean) * window[k], 0.0};
    fft(buf);
    for (int k = 0; k <= n / 2; ++k) {
      double p = std::norm(buf[k]) / (fs * win_power);
      if (k != 0 && k != n / 2) p *= 2.0;  // fold the negative frequencies
      result.power[k] += p;
    }
    ++segments;
  }
  for (double& p : result.power) p /= segments;
  return result;
}

}  // namespace flowrl::analysis
