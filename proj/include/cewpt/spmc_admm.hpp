#pragma once

#include "cewpt/solution.hpp"

namespace cewpt {

/// Per-user minimum received powers. Constraints read |h_k^H x|^2 >= p_k / eta.
struct QosSpec {
  RealVector p;
  double efficiency = 1.0;

  RealVector thresholds() const { return p / efficiency; }
  void validate(Index users) const;
};

struct AdmmConfig {
  double rho = 0.0;            // transmit-side penalty; <= 0 selects 0.1 lambda_max(H^H H) / K
  double rho_bar = 0.0;        // RIS-side penalty; <= 0 selects 0.1 lambda_max(L) / K
  int inner_max_iters = 300;
  double inner_tolerance = 1e-6;
  double epsilon = 1e-5;
  int max_outer_iters = 500;
  double qos_tolerance = 1e-3;  // relative violation still reported as feasible

  void validate() const;
};

/// Nearest point to z in {e : |h^H e|^2 >= tau}. When z is infeasible and
/// h^H z = 0 the nearest set is a circle; the point on it with phase 0 is
/// returned, z + (sqrt(tau) / ||h||^2) h.
ComplexVector qos_halfspace_project(const ComplexVector& h, double tau, const ComplexVector& z);

/// max_k (tau_k - |g_k^H z|^2) / tau_k over users with tau_k > 0, clipped at 0.
/// `rows` holds g_k^H as row k.
double max_relative_violation(const ComplexMatrix& rows, const RealVector& tau, const ComplexVector& z);

struct AdmmStageResult {
  ComplexVector value;
  int iterations = 0;
  double primal_residual = 0.0;  // max_k ||e_k - x||
  double dual_residual = 0.0;    // ||x^(t+1) - x^(t)||
  double max_violation = 0.0;
  double max_dual_norm = 0.0;    // max_k ||u_k|| at termination
  bool converged = false;
};

/// Consensus ADMM for  max Re{w^H z}  s.t.  |z_m| = amplitude,
/// |g_k^H z|^2 >= tau_k, with one local copy e_k per constraint. `rows`
/// holds g_k^H as row k; `z0` is the starting global iterate.
AdmmStageResult consensus_admm(const ComplexVector& linear, const ComplexMatrix& rows, const RealVector& tau,
                               double amplitude, double rho, const ComplexVector& z0, const AdmmConfig& cfg);

/// Transmit stage at fixed RIS phases: minorant of ||H x||^2 taken at x_hat.
AdmmStageResult admm_x_stage(const ComplexMatrix& h, const ComplexVector& x_hat, const QosSpec& qos, double power,
                             double rho, const AdmmConfig& cfg);

/// RIS stage at fixed x, on the lifted variable b = [t v; t]. `c` holds
/// c_k as column k (N x K), `a` the direct terms. The returned value is the
/// de-lifted v = b[0:N] / b[N].
AdmmStageResult admm_v_stage(const ComplexMatrix& c, const ComplexVector& a, const QosSpec& qos, double rho_bar,
                             const ComplexVector& v_hat, const AdmmConfig& cfg);

/// Default penalties, scale-aware.
double default_rho(const ComplexMatrix& h);
double default_rho_bar(const ComplexMatrix& c, const ComplexVector& a);

struct SpmcDiagnostics {
  int x_stages_rejected = 0;
  int v_stages_rejected = 0;
  int inner_not_converged = 0;
  std::vector<double> violation_trace;
};

/// Alternating SCA + consensus ADMM for sum-power maximisation with
/// per-user minimum-power constraints. Stage outputs are accepted in
/// lexicographic order: reduce the QoS violation until it is within
/// tolerance, then only accept feasible, non-decreasing objectives. The
/// trace records the objective of every accepted outer iterate from the
/// first feasible one on.
BeamformerSolution solve_spmc(const ChannelRealization& real, const QosSpec& qos, const AdmmConfig& cfg,
                              SpmcDiagnostics* diagnostics = nullptr);

/// Bisection on a common threshold tau (p_k = eta tau): the largest tau for
/// which solve_spmc reports a feasible solution, to 1% relative.
struct QmmEstimate {
  double value = 0.0;  // tau, in the units of |h_k^H x|^2
  int solves = 0;
};

QmmEstimate estimate_qmm(const ChannelRealization& real, const AdmmConfig& cfg, const SolverConfig& sca_cfg = {},
                         double relative_tolerance = 0.01);

}  // namespace cewpt
