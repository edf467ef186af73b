#pragma once

#include "cewpt/channel.hpp"

#include <string>
#include <vector>

namespace cewpt {

enum class SolveStatus { kConverged, kMaxIters, kQosViolated };

std::string to_string(SolveStatus status);

/// Joint transmit/RIS configuration.
///
/// The transmit vector is x = sqrt(P/M) exp(j alpha) and the RIS applies
/// exp(j theta_n) on element n, i.e. Psi = diag(exp(j theta)). `v` follows
/// the conjugate convention v = exp(-j theta) so that Psi = diag(conj(v)).
struct BeamformerSolution {
  RealVector alpha;
  RealVector theta;
  ComplexVector x;
  ComplexVector v;
  double objective = 0.0;         // sum_k |h_k^H x|^2, without eta
  RealVector user_powers;         // eta |h_k^H x|^2
  std::vector<double> trace;      // objective per accepted outer iteration
  SolveStatus status = SolveStatus::kMaxIters;
  int iterations = 0;
  double max_violation = 0.0;     // relative QoS violation, 0 when unconstrained
};

/// Fill x, v, objective and user powers from alpha/theta.
void finalize_solution(const ChannelRealization& real, BeamformerSolution& sol);

/// sqrt(P/M) exp(j alpha).
ComplexVector transmit_vector(const RealVector& alpha, double power);

/// ||H x||^2 for the composite channel at theta.
double sum_power(const ChannelRealization& real, const RealVector& alpha, const RealVector& theta);

struct SolverConfig {
  double epsilon = 1e-5;       // relative objective increase that stops the outer loop
  int max_outer_iters = 500;
  int restarts = 1;            // run 0 starts from zero phases, later runs from random phases
  std::uint64_t seed = 1;

  void validate() const;
};

}  // namespace cewpt
