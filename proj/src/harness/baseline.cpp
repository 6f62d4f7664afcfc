#include "flowrl/harness/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "flowrl/analysis/stats.hpp"
#include "flowrl/errors.hpp"
#include "flowrl/flow/strouhal.hpp"

namespace flowrl::harness {

namespace {

// Strouhal estimate on the decimated trailing lift series; returns 0 until a
// credible peak exists.
double try_strouhal(const std::vector<flow::ForceSample>& trace, double steps_per_tu,
                    double window_tu) {
  const long stride = std::max(1L, std::lround(steps_per_tu / 64.0));
  const std::size_t want = static_cast<std::size_t>(window_tu * steps_per_tu);
  const std::size_t lo = trace.size() > want ? trace.size() - want : 0;
  std::vector<double> lift;
  for (std::size_t k = lo; k < trace.size(); k += stride) lift.push_back(trace[k].cl);
  try {
    return flow::dominant_frequency(lift, stride / steps_per_tu);
  } catch (const EstimationError&) {
    return 0.0;
  }
}

struct WindowStats {
  double cl_std = 0.0;
  double cd_mean = 0.0;
  double cd_spread = 0.0;  // max - min
};

WindowStats window_stats(const std::vector<flow::ForceSample>& trace, std::size_t lo,
                         std::size_t hi) {
  std::vector<double> cd, cl;
  cd.reserve(hi - lo);
  cl.reserve(hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    cd.push_back(trace[k].cd);
    cl.push_back(trace[k].cl);
  }
  WindowStats w;
  w.cl_std = analysis::std_of(cl);
  w.cd_mean = analysis::mean_of(cd);
  w.cd_spread = *std::max_element(cd.begin(), cd.end()) -
                *std::min_element(cd.begin(), cd.end());
  return w;
}

}  // namespace

BaselineResult prepare_baseline(flow::LatticeField& field, const BaselineOptions& opts,
                                std::vector<flow::ForceSample>* trace_out) {
  const double steps_per_tu = field.config().steps_per_time_unit();
  const long max_steps = std::lround(opts.max_time_units * steps_per_tu);
  const long check_steps = std::max(1L, std::lround(opts.check_interval_tu * steps_per_tu));
  const long min_steps = std::lround(opts.min_time_units * steps_per_tu);

  std::vector<flow::ForceSample> trace;
  trace.reserve(static_cast<std::size_t>(max_steps));

  double st = 0.0;
  bool converged = false;
  long taken = 0;
  while (taken < max_steps) {
    for (long k = 0; k < check_steps && taken < max_steps; ++k, ++taken) {
      field.step_uncontrolled();
      trace.push_back(field.forces());
    }
    if (taken < min_steps) continue;

    st = try_strouhal(trace, steps_per_tu, 40.0);
    if (st <= 0.0) continue;
    const double period_tu = 1.0 / st;
    const std::size_t period_steps =
        static_cast<std::size_t>(std::lround(period_tu * steps_per_tu));
    if (trace.size() < 20 * period_steps) continue;

    // Stationarity: lift amplitude stable within tolerance across two
    // 10-period windows, and the slow drag transient decayed (mean drift and
    // envelope drift both small).
    const std::size_t hi = trace.size();
    const WindowStats recent = window_stats(trace, hi - 10 * period_steps, hi);
    const WindowStats earlier =
        window_stats(trace, hi - 20 * period_steps, hi - 10 * period_steps);
    const bool lift_ok = recent.cl_std > 0.02 &&
                         std::abs(recent.cl_std - earlier.cl_std) <
                             opts.amplitude_tol * recent.cl_std;
    const bool drag_ok =
        std::abs(recent.cd_mean - earlier.cd_mean) < 0.001 * std::abs(recent.cd_mean) &&
        std::abs(recent.cd_spread - earlier.cd_spread) <
            0.03 * std::max(recent.cd_spread, 1e-12);
    if (lift_ok && drag_ok) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw EstimationError("prepare_baseline: no stationary shedding within the step budget");

  const double period_tu = 1.0 / st;
  const std::size_t period_steps =
      static_cast<std::size_t>(std::lround(period_tu * steps_per_tu));
  const std::size_t lo = trace.size() - 10 * period_steps;

  BaselineResult result;
  result.strouhal = st;
  result.shedding_period_tu = period_tu;
  result.steps = taken;
  result.time_units = taken / steps_per_tu;
  std::vector<double> cd, cl;
  for (std::size_t k = lo; k < trace.size(); ++k) {
    cd.push_back(trace[k].cd);
    cl.push_back(trace[k].cl);
  }
  result.cd_mean = analysis::mean_of(cd);
  result.cd_max = *std::max_element(cd.begin(), cd.end());
  result.cl_max = *std::max_element(cl.begin(), cl.end());
  result.cl_std = analysis::std_of(cl);
  if (trace_out) *trace_out = std::move(trace);
  return result;
}

}  // namespace flowrl::harness
