#pragma once

#include <cstdint>

namespace hybridcost {

/// EWMA mean and absolute deviation of arrivals per epoch.
struct MonitorState {
  double mu = 0.0;
  double sigma = 0.0;
  double w_mu = 0.5;
  double w_sigma = 0.5;
  // Multiplier on sigma for the balancer threshold mu + phi * sigma.
  double phi = 1.0;

  double threshold() const { return mu + phi * sigma; }
};

// Validates weights in (0, 1] and non-negative mu, sigma.
MonitorState make_monitor(double w_mu = 0.5, double w_sigma = 0.5, double phi = 1.0, double mu = 0.0,
                          double sigma = 0.0);

// mu' = (1 - w_mu) mu + w_mu lambda, then
// sigma' = (1 - w_sigma) sigma + w_sigma |lambda - mu'|.
// Written in incremental form so (mu = lambda, sigma = 0) is an exact fixed point.
MonitorState update(const MonitorState& state, double lambda);

struct ScaleDecision {
  std::int64_t k = 0;
  double residual = 0.0;
  std::int64_t target = 0;
};

// Sizes on mu + sigma: k = floor((mu + sigma) / r_max), one more instance when
// the residual exceeds t_cip.
ScaleDecision scale_target(const MonitorState& state, double r_max, double t_cip);

}  // namespace hybridcost
