#pragma once

#include <stdexcept>
#include <string>

namespace flowrl {

/// Invalid user-supplied configuration (geometry, layouts, run files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The lattice solver produced an unphysical state (rho <= 0 or |u| >= c_s).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// A statistical estimate (spectral peak, stationarity) could not be formed.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flowrl
