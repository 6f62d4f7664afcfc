#pragma once

#include <vector>

#include "flowrl/actuation/jets.hpp"
#include "flowrl/flow/forces.hpp"
#include "flowrl/flow/lattice.hpp"

namespace flowrl::harness {

struct BaselineOptions {
  double max_time_units = 500.0;   ///< abort budget for reaching stationarity
  double min_time_units = 60.0;
  double check_interval_tu = 10.0;
  double amplitude_tol = 0.01;     ///< relative lift-amplitude drift over 10 periods
};

struct BaselineResult {
  double cd_mean = 0.0;   ///< over the final 10 shedding periods
  double cd_max = 0.0;
  double cl_max = 0.0;
  double cl_std = 0.0;
  double strouhal = 0.0;
  double shedding_period_tu = 0.0;
  double time_units = 0.0;
  long steps = 0;
};

/// Runs the uncontrolled flow from rest until the vortex shedding is
/// statistically stationary (lift amplitude stable within the tolerance over
/// ten periods). On return `field` holds the converged state to be used as
/// the episode snapshot. Throws EstimationError when the budget is exhausted.
BaselineResult prepare_baseline(flow::LatticeField& field, const BaselineOptions& opts = {},
                                std::vector<flow::ForceSample>* trace_out = nullptr);

}  // namespace flowrl::harness
