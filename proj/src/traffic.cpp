#include "hybridcost/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "hybridcost/error.hpp"

namespace hybridcost {

MonitorState make_monitor(double w_mu, double w_sigma, double phi, double mu, double sigma) {
  if (!(w_mu > 0.0 && w_mu <= 1.0) || !(w_sigma > 0.0 && w_sigma <= 1.0)) {
    throw InvalidArgument("EWMA weights must lie in (0, 1]");
  }
  if (!(mu >= 0.0) || !(sigma >= 0.0)) {
    throw InvalidArgument("EWMA state must be non-negative");
  }
  if (!std::isfinite(phi)) {
    throw InvalidArgument("phi must be finite");
  }
  return MonitorState{mu, sigma, w_mu, w_sigma, phi};
}

MonitorState update(const MonitorState& state, double lambda) {
  if (!(lambda >= 0.0)) {
    throw InvalidArgument("arrivals must be non-negative");
  }
  MonitorState next = state;
  next.mu = state.mu + state.w_mu * (lambda - state.mu);
  next.sigma = state.sigma + state.w_sigma * (std::abs(lambda - next.mu) - state.sigma);
  next.mu = std::max(0.0, next.mu);
  next.sigma = std::max(0.0, next.sigma);
  return next;
}

ScaleDecision scale_target(const MonitorState& state, double r_max, double t_cip) {
  if (!(r_max > 0.0)) {
    throw InvalidArgument("r_max must be positive");
  }
  if (!(t_cip >= 0.0 && t_cip <= r_max)) {
    throw InvalidArgument("t_cip must lie in [0, r_max]");
  }
  const double load = state.mu + state.sigma;
  ScaleDecision decision;
  const double k = std::floor(load / r_max);
  decision.k = static_cast<std::int64_t>(k);
  decision.residual = std::max(0.0, load - k * r_max);
  decision.target = decision.k + (decision.residual > t_cip ? 1 : 0);
  return decision;
}

}  // namespace hybridcost
