#pragma once

#include "cewpt/solution.hpp"

#include <functional>

namespace cewpt {

/// maximise tr(C X)  s.t.  diag(X) = diagonal,  X Hermitian PSD.
struct SdpProblem {
  ComplexMatrix cost;
  double diagonal = 1.0;
  double tolerance = 1e-6;
  int max_iters = 5000;
};

struct SdpResult {
  ComplexMatrix x;
  double objective = 0.0;
  double dual_bound = 0.0;       // objective of a feasible dual point; >= optimum
  double primal_residual = 0.0;  // ||X - Z||_F / n at termination (normalised scale)
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ADMM splitting between the affine diagonal constraint and the PSD cone,
/// with over-relaxation and residual-balanced penalty. The returned X is the
/// PSD iterate rescaled by a diagonal congruence, so it is exactly PSD and
/// meets the diagonal constraint to rounding.
SdpResult solve_diag_sdp(const SdpProblem& problem);

using CandidateObjective = std::function<double(const ComplexVector&)>;

/// Gaussian randomisation: u_i = exp(j arg(U S^1/2 w_i)), w_i ~ CN(0, I).
/// Returns the unit-modulus candidate maximising `objective`; ties go to the
/// lowest candidate index.
ComplexVector randomize_round(const ComplexMatrix& x, int samples, Rng& rng, const CandidateObjective& objective);

struct SdrConfig {
  int randomizations = 100;  // s
  std::uint64_t seed = 1;
  double sdp_tolerance = 1e-6;
  int sdp_max_iters = 5000;

  void validate() const;
};

/// Per-stage bookkeeping: SDP value against the rounded candidate's value on
/// the same (lifted) objective.
struct SdrStageRecord {
  bool transmit_stage = true;
  double sdp_value = 0.0;
  double rounded_value = 0.0;
  bool sdp_converged = true;
};

struct SdrDiagnostics {
  std::vector<SdrStageRecord> stages;
  int sdp_failures = 0;
};

/// Alternating SDR: transmit phases from the relaxation of max ||H x||^2 and
/// RIS phases from the lifted relaxation with auxiliary variable t. Returns
/// the best iterate seen.
BeamformerSolution solve_spm_sdr(const ChannelRealization& real, const SdrConfig& cfg, const SolverConfig& outer,
                                 SdrDiagnostics* diagnostics = nullptr);

/// Lifted cost R = sum_k [[c c^H, conj(a) c], [a c^H, 0]] of size (N+1).
ComplexMatrix lifted_reflection_cost(const ComplexMatrix& c, const ComplexVector& a);

}  // namespace cewpt
