#include "cewpt/spmc_admm.hpp"

#include "cewpt/spm_sca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cewpt {

void QosSpec::validate(Index users) const {
  require_dims(p.size() == users, "qos: one minimum power per user");
  if (!(efficiency > 0.0)) throw ConfigError("qos: efficiency must be positive");
  for (Index k = 0; k < p.size(); ++k)
    if (!(p[k] >= 0.0)) throw ConfigError("qos: minimum powers must be >= 0");
}

void AdmmConfig::validate() const {
  if (inner_max_iters < 1) throw ConfigError("admm: inner_max_iters must be >= 1");
  if (!(inner_tolerance > 0.0)) throw ConfigError("admm: inner tolerance must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("admm: epsilon must be positive");
  if (max_outer_iters < 1) throw ConfigError("admm: max_outer_iters must be >= 1");
  if (!(qos_tolerance >= 0.0)) throw ConfigError("admm: QoS tolerance must be >= 0");
}

ComplexVector qos_halfspace_project(const ComplexVector& h, double tau, const ComplexVector& z) {
  require_dims(h.size() == z.size(), "qos_halfspace_project: h and z must have equal length");
  const Complex s = h.dot(z);  // h^H z
  const double mag = std::abs(s);
  if (mag * mag >= tau) return z;
  const double hn2 = h.squaredNorm();
  if (hn2 == 0.0) return z;  // empty constraint set; nothing to project onto
  const double target = std::sqrt(tau);
  if (mag == 0.0) return z + (target / hn2) * h;
  return z + ((target - mag) / (hn2 * mag) * s) * h;
}

double max_relative_violation(const ComplexMatrix& rows, const RealVector& tau, const ComplexVector& z) {
  require_dims(rows.rows() == tau.size(), "max_relative_violation: one threshold per row");
  ComplexVector y = rows * z;
  double worst = 0.0;
  for (Index k = 0; k < tau.size(); ++k) {
    if (tau[k] <= 0.0) continue;
    worst = std::max(worst, (tau[k] - std::norm(y[k])) / tau[k]);
  }
  return worst;
}

AdmmStageResult consensus_admm(const ComplexVector& linear, const ComplexMatrix& rows, const RealVector& tau,
                               double amplitude, double rho, const ComplexVector& z0, const AdmmConfig& cfg) {
  require_dims(rows.cols() == z0.size() && linear.size() == z0.size(), "consensus_admm: dimension mismatch");
  require_dims(rows.rows() == tau.size(), "consensus_admm: one threshold per constraint row");
  if (!(rho > 0.0)) throw ConfigError("consensus_admm: penalty must be positive");

  const Index users = rows.rows();
  const Index dim = z0.size();
  const double tol = cfg.inner_tolerance * amplitude * std::sqrt(static_cast<double>(std::max<Index>(dim, 1)));

  std::vector<ComplexVector> g(users);
  for (Index k = 0; k < users; ++k) g[k] = rows.row(k).adjoint();

  ComplexVector z = z0;
  std::vector<ComplexVector> e(users), u(users, ComplexVector::Zero(dim));
  for (Index k = 0; k < users; ++k) e[k] = qos_halfspace_project(g[k], tau[k], z);

  AdmmStageResult out;
  for (int t = 1; t <= cfg.inner_max_iters; ++t) {
    ComplexVector pull = ComplexVector::Zero(dim);
    for (Index k = 0; k < users; ++k) pull += u[k] + e[k];
    ComplexVector z_next = phase_align(linear + (2.0 * rho) * pull, amplitude);

    // Local copies and duals are independent per user.
    double primal = 0.0;
    for (Index k = 0; k < users; ++k) {
      e[k] = qos_halfspace_project(g[k], tau[k], z_next - u[k]);
      u[k] += e[k] - z_next;
      primal = std::max(primal, (e[k] - z_next).norm());
    }
    out.dual_residual = (z_next - z).norm();
    out.primal_residual = primal;
    out.iterations = t;
    z = std::move(z_next);
    if (primal <= tol && out.dual_residual <= tol) {
      out.converged = true;
      break;
    }
  }
  for (Index k = 0; k < users; ++k) out.max_dual_norm = std::max(out.max_dual_norm, u[k].norm());
  out.value = std::move(z);
  out.max_violation = max_relative_violation(rows, tau, out.value);
  return out;
}

double default_rho(const ComplexMatrix& h) {
  const double k = static_cast<double>(std::max<Index>(h.rows(), 1));
  double lam = max_eigenvalue(h * h.adjoint());
  return std::max(0.1 * lam / k, std::numeric_limits<double>::min());
}

namespace {

ComplexMatrix lifted_rows(const ComplexMatrix& c, const ComplexVector& a) {
  // Row k is l_k^H with l_k = [c_k; a_k].
  ComplexMatrix l(c.rows() + 1, c.cols());
  l.topRows(c.rows()) = c;
  l.bottomRows(1) = a.transpose();
  return l.adjoint();
}

}  // namespace

double default_rho_bar(const ComplexMatrix& c, const ComplexVector& a) {
  ComplexMatrix rows = lifted_rows(c, a);
  const double k = static_cast<double>(std::max<Index>(rows.rows(), 1));
  double lam = max_eigenvalue(rows * rows.adjoint());
  return std::max(0.1 * lam / k, std::numeric_limits<double>::min());
}

AdmmStageResult admm_x_stage(const ComplexMatrix& h, const ComplexVector& x_hat, const QosSpec& qos, double power,
                             double rho, const AdmmConfig& cfg) {
  require_dims(h.cols() == x_hat.size(), "admm_x_stage: H columns must match x length");
  qos.validate(h.rows());
  const double amp = std::sqrt(power / static_cast<double>(x_hat.size()));
  ComplexVector linear = h.adjoint() * (h * x_hat);
  return consensus_admm(linear, h, qos.thresholds(), amp, rho, x_hat, cfg);
}

AdmmStageResult admm_v_stage(const ComplexMatrix& c, const ComplexVector& a, const QosSpec& qos, double rho_bar,
                             const ComplexVector& v_hat, const AdmmConfig& cfg) {
  require_dims(c.rows() == v_hat.size(), "admm_v_stage: c_k must have N entries");
  require_dims(a.size() == c.cols(), "admm_v_stage: one direct term per user");
  qos.validate(c.cols());
  const Index n = c.rows();
  ComplexMatrix rows = lifted_rows(c, a);
  ComplexVector b_hat(n + 1);
  b_hat.head(n) = v_hat;
  b_hat[n] = 1.0;
  ComplexVector linear = rows.adjoint() * (rows * b_hat);
  AdmmStageResult out = consensus_admm(linear, rows, qos.thresholds(), 1.0, rho_bar, b_hat, cfg);
  ComplexVector b = out.value;
  out.value = b.head(n) / b[n];
  return out;
}

namespace {

struct Evaluation {
  double objective;
  double violation;
};

Evaluation evaluate(const ComplexMatrix& h, const ComplexVector& x, const RealVector& tau) {
  return {(h * x).squaredNorm(), max_relative_violation(h, tau, x)};
}

bool preferable(const Evaluation& cand, const Evaluation& cur, double tol) {
  const bool cand_ok = cand.violation <= tol;
  if (cur.violation <= tol) return cand_ok && cand.objective >= cur.objective;
  return cand_ok || cand.violation < cur.violation;
}

}  // namespace

BeamformerSolution solve_spmc(const ChannelRealization& real, const QosSpec& qos, const AdmmConfig& cfg,
                              SpmcDiagnostics* diagnostics) {
  real.validate();
  cfg.validate();
  qos.validate(real.users());

  const Index m = real.antennas(), n = real.elements();
  const RealVector tau = qos.thresholds();
  const double tol = cfg.qos_tolerance;
  SpmcDiagnostics diag;

  RealVector alpha = RealVector::Zero(m);
  RealVector theta = RealVector::Zero(n);
  ComplexVector x = transmit_vector(alpha, real.power);
  ComplexVector v = unit_circle_exp(-theta);
  ComplexMatrix h = composite_channel(real, theta);
  Evaluation cur = evaluate(h, x, tau);

  BeamformerSolution sol;
  sol.status = SolveStatus::kMaxIters;
  if (cur.violation <= tol) sol.trace.push_back(cur.objective);
  diag.violation_trace.push_back(cur.violation);

  for (int it = 1; it <= cfg.max_outer_iters; ++it) {
    const Evaluation before = cur;
    bool accepted = false;

    double rho = cfg.rho > 0.0 ? cfg.rho : default_rho(h);
    AdmmStageResult xs = admm_x_stage(h, x, qos, real.power, rho, cfg);
    if (!xs.converged) ++diag.inner_not_converged;
    Evaluation x_eval = evaluate(h, xs.value, tau);
    if (preferable(x_eval, cur, tol)) {
      x = xs.value;
      cur = x_eval;
      accepted = true;
    } else {
      ++diag.x_stages_rejected;
    }

    if (n > 0) {
      ReflectionTerms terms = reflection_terms(real, x);
      double rho_bar = cfg.rho_bar > 0.0 ? cfg.rho_bar : default_rho_bar(terms.c, terms.a);
      AdmmStageResult vs = admm_v_stage(terms.c, terms.a, qos, rho_bar, v, cfg);
      if (!vs.converged) ++diag.inner_not_converged;
      RealVector theta_c = arg_phases(vs.value.conjugate());
      ComplexMatrix h_c = composite_channel(real, theta_c);
      Evaluation v_eval = evaluate(h_c, x, tau);
      if (preferable(v_eval, cur, tol)) {
        theta = theta_c;
        v = unit_circle_exp(-theta);
        h = std::move(h_c);
        cur = v_eval;
        accepted = true;
      } else {
        ++diag.v_stages_rejected;
      }
    }

    sol.iterations = it;
    diag.violation_trace.push_back(cur.violation);
    const bool feasible = cur.violation <= tol;
    if (feasible) sol.trace.push_back(cur.objective);

    if (!accepted) {
      sol.status = SolveStatus::kConverged;
      break;
    }
    if (feasible && before.violation <= tol) {
      bool stalled = before.objective > 0.0 ? (cur.objective - before.objective) / before.objective < cfg.epsilon
                                            : cur.objective <= before.objective;
      if (stalled) {
        sol.status = SolveStatus::kConverged;
        break;
      }
    }
  }

  sol.alpha = arg_phases(x);
  sol.theta = theta;
  finalize_solution(real, sol);
  sol.max_violation = max_relative_violation(composite_channel(real, sol.theta), tau, sol.x);
  if (sol.max_violation > tol) sol.status = SolveStatus::kQosViolated;
  if (diagnostics) *diagnostics = std::move(diag);
  return sol;
}

QmmEstimate estimate_qmm(const ChannelRealization& real, const AdmmConfig& cfg, const SolverConfig& sca_cfg,
                         double relative_tolerance) {
  const Index k = real.users();
  QmmEstimate out;
  BeamformerSolution sca = solve_spm_sca(real, sca_cfg);
  RealVector user_q = sca.user_powers / real.efficiency;
  double lo = user_q.minCoeff();
  double hi = std::max(sca.objective / static_cast<double>(k), lo);
  if (hi <= 0.0) return out;

  auto feasible = [&](double tau) {
    QosSpec qos{RealVector::Constant(k, real.efficiency * tau), real.efficiency};
    ++out.solves;
    return solve_spmc(real, qos, cfg).status != SolveStatus::kQosViolated;
  };

  // The sum-power solution bounds the max-min value by Q_sum / K only when it
  // is optimal; widen a few times if SPMC meets the bound.
  for (int grow = 0; grow < 3 && feasible(hi); ++grow) {
    lo = hi;
    hi *= 1.25;
  }
  while (hi - lo > relative_tolerance * hi) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  out.value = lo;
  return out;
}

}  // namespace cewpt
