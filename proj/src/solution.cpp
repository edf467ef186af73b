#include "cewpt/solution.hpp"

#include <cmath>

namespace cewpt {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "Converged";
    case SolveStatus::kMaxIters: return "MaxIters";
    case SolveStatus::kQosViolated: return "QosViolated";
  }
  return "Unknown";
}

ComplexVector transmit_vector(const RealVector& alpha, double power) {
  const double amp = alpha.size() > 0 ? std::sqrt(power / static_cast<double>(alpha.size())) : 0.0;
  ComplexVector x(alpha.size());
  for (Index m = 0; m < alpha.size(); ++m) x[m] = std::polar(amp, alpha[m]);
  return x;
}

void finalize_solution(const ChannelRealization& real, BeamformerSolution& sol) {
  require_dims(sol.alpha.size() == real.antennas(), "solution: alpha must have M entries");
  require_dims(sol.theta.size() == real.elements(), "solution: theta must have N entries");
  sol.x = transmit_vector(sol.alpha, real.power);
  sol.v = unit_circle_exp(-sol.theta);
  ComplexMatrix h = composite_channel(real, sol.theta);
  sol.user_powers = received_powers(h, sol.x, real.efficiency);
  sol.objective = (h * sol.x).squaredNorm();
}

double sum_power(const ChannelRealization& real, const RealVector& alpha, const RealVector& theta) {
  return (composite_channel(real, theta) * transmit_vector(alpha, real.power)).squaredNorm();
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("solver: epsilon must be positive");
  if (max_outer_iters < 1) throw ConfigError("solver: max_outer_iters must be >= 1");
  if (restarts < 1) throw ConfigError("solver: restarts must be >= 1");
}

}  // namespace cewpt
