#include "cewpt/sdr.hpp"

#include "cewpt/spm_sca.hpp"

#include <cmath>

namespace cewpt {

namespace {

constexpr double kOverRelaxation = 1.6;
constexpr int kPenaltyUpdatePeriod = 10;

void hermitize(ComplexMatrix& a) { a = (0.5 * (a + a.adjoint())).eval(); }

// Upper bound on max tr(C Y), diag(Y) = 1, Y PSD, from a dual point built
// out of the primal iterate: y_n = Re (C Y)_nn / Y_nn, shifted until
// diag(y) - C is PSD.
double dual_bound_from(const ComplexMatrix& c, const ComplexMatrix& y) {
  const Index n = c.rows();
  ComplexMatrix cy = c * y;
  RealVector dual(n);
  for (Index i = 0; i < n; ++i) {
    double yy = y(i, i).real();
    dual[i] = yy > 1e-12 ? cy(i, i).real() / yy : c(i, i).real();
  }
  ComplexMatrix slack = c;
  slack.diagonal() -= dual.cast<Complex>();
  double shift = std::max(0.0, hermitian_eig(slack, 1e-8).values[0]);
  return dual.sum() + n * shift;
}

}  // namespace

SdpResult solve_diag_sdp(const SdpProblem& problem) {
  const ComplexMatrix& cost = problem.cost;
  require_dims(cost.rows() == cost.cols(), "solve_diag_sdp: cost must be square");
  if (cost.rows() < 1) throw DimensionMismatch("solve_diag_sdp: empty problem");
  if (!(problem.diagonal > 0.0)) throw ConfigError("solve_diag_sdp: diagonal value must be positive");
  if (hermitian_defect(cost) > 1e-10) throw NonHermitian("solve_diag_sdp: cost must be Hermitian");

  const Index n = cost.rows();
  const double delta = problem.diagonal;
  SdpResult out;

  const double scale = cost.norm();
  if (scale == 0.0 || n == 1) {
    out.x = delta * ComplexMatrix::Identity(n, n);
    out.objective = delta * cost.trace().real();
    out.dual_bound = out.objective;
    out.converged = true;
    return out;
  }

  ComplexMatrix c = cost / scale;
  hermitize(c);

  ComplexMatrix z = ComplexMatrix::Identity(n, n);
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  ComplexMatrix y(n, n), z_prev(n, n);
  double rho = 1.0;
  const double eps = problem.tolerance * std::sqrt(static_cast<double>(n));

  for (int it = 1; it <= problem.max_iters; ++it) {
    y = z - u + c / rho;
    hermitize(y);
    y.diagonal().setOnes();

    ComplexMatrix relaxed = kOverRelaxation * y + (1.0 - kOverRelaxation) * z;
    z_prev = z;
    z = project_psd(relaxed + u);
    hermitize(z);
    u += relaxed - z;

    out.primal_residual = (y - z).norm();
    out.dual_residual = rho * (z - z_prev).norm();
    out.iterations = it;
    if (out.primal_residual <= eps && out.dual_residual <= eps) {
      out.converged = true;
      break;
    }
    if (it % kPenaltyUpdatePeriod == 0) {
      if (out.primal_residual > 10.0 * out.dual_residual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (out.dual_residual > 10.0 * out.primal_residual) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }

  // Diagonal congruence keeps Z PSD and restores the unit diagonal.
  RealVector d(n);
  for (Index i = 0; i < n; ++i) {
    double zz = z(i, i).real();
    d[i] = zz > 1e-12 ? 1.0 / std::sqrt(zz) : 0.0;
  }
  ComplexMatrix x = d.asDiagonal() * z * d.asDiagonal();
  for (Index i = 0; i < n; ++i)
    if (d[i] == 0.0) x(i, i) = 1.0;
  hermitize(x);
  x.diagonal().setOnes();

  out.x = delta * x;
  out.objective = delta * scale * (c * x).trace().real();
  out.dual_bound = delta * scale * dual_bound_from(c, x);
  return out;
}

ComplexVector randomize_round(const ComplexMatrix& x, int samples, Rng& rng, const CandidateObjective& objective) {
  require_dims(x.rows() == x.cols(), "randomize_round: X must be square");
  if (samples < 1) throw ConfigError("randomize_round: need at least one sample");
  const Index n = x.rows();
  HermitianEig eig = hermitian_eig(x, 1e-8);
  // Eigenvalues at round-off level would otherwise leak sqrt(eps) noise.
  const double floor = 1e-12 * std::max(eig.values[0], 0.0);
  RealVector scale = eig.values.unaryExpr([floor](double l) { return l > floor ? std::sqrt(l) : 0.0; });
  ComplexMatrix factor = eig.vectors * scale.asDiagonal();

  ComplexVector best;
  double best_value = 0.0;
  for (int i = 0; i < samples; ++i) {
    ComplexVector w = sample_cscg(n, 1, rng).col(0);
    ComplexVector cand = phase_align(factor * w);
    double value = objective(cand);
    if (i == 0 || value > best_value) {
      best = std::move(cand);
      best_value = value;
    }
  }
  return best;
}

void SdrConfig::validate() const {
  if (randomizations < 1) throw ConfigError("sdr: randomization count must be >= 1");
  if (!(sdp_tolerance > 0.0)) throw ConfigError("sdr: SDP tolerance must be positive");
  if (sdp_max_iters < 1) throw ConfigError("sdr: SDP iteration cap must be >= 1");
}

ComplexMatrix lifted_reflection_cost(const ComplexMatrix& c, const ComplexVector& a) {
  require_dims(a.size() == c.cols(), "lifted_reflection_cost: one direct term per user");
  const Index n = c.rows();
  ComplexMatrix r = ComplexMatrix::Zero(n + 1, n + 1);
  r.topLeftCorner(n, n) = c * c.adjoint();
  ComplexVector cross = c * a.conjugate();  // sum_k conj(a_k) c_k
  r.topRightCorner(n, 1) = cross;
  r.bottomLeftCorner(1, n) = cross.adjoint();
  return r;
}

namespace {

BeamformerSolution sdr_run(const ChannelRealization& real, const SdrConfig& cfg, const SolverConfig& outer,
                           const RealVector& alpha0, const RealVector& theta0, Rng& rng, SdrDiagnostics& diag) {
  const Index m = real.antennas(), n = real.elements();
  const double amp = std::sqrt(real.power / static_cast<double>(m));

  RealVector alpha = alpha0;
  RealVector theta = theta0;
  ComplexMatrix h = composite_channel(real, theta);
  double q = (h * transmit_vector(alpha, real.power)).squaredNorm();

  BeamformerSolution sol;
  sol.trace.push_back(q);
  RealVector best_alpha = alpha, best_theta = theta;
  double best_q = q;
  sol.status = SolveStatus::kMaxIters;

  for (int it = 1; it <= outer.max_outer_iters; ++it) {
    SdpProblem xp{h.adjoint() * h, real.power / static_cast<double>(m), cfg.sdp_tolerance, cfg.sdp_max_iters};
    hermitize(xp.cost);
    SdpResult xr = solve_diag_sdp(xp);
    ComplexVector u = randomize_round(xr.x, cfg.randomizations, rng,
                                      [&](const ComplexVector& c) { return (h * c).squaredNorm(); });
    ComplexVector x = amp * u;
    alpha = arg_phases(x);
    diag.stages.push_back({true, xr.objective, (h * x).squaredNorm(), xr.converged});
    if (!xr.converged) ++diag.sdp_failures;

    if (n > 0) {
      ReflectionTerms terms = reflection_terms(real, x);
      SdpProblem vp{lifted_reflection_cost(terms.c, terms.a), 1.0, cfg.sdp_tolerance, cfg.sdp_max_iters};
      hermitize(vp.cost);
      SdpResult vr = solve_diag_sdp(vp);
      auto lifted_value = [&](const ComplexVector& b) { return (b.adjoint() * vp.cost * b)(0, 0).real(); };
      ComplexVector b = randomize_round(vr.x, cfg.randomizations, rng, lifted_value);
      ComplexVector v = b.head(n) / b[n];
      theta = arg_phases(v.conjugate());
      diag.stages.push_back({false, vr.objective, lifted_value(b), vr.converged});
      if (!vr.converged) ++diag.sdp_failures;
      h = composite_channel(real, theta);
    }

    double q_next = (h * transmit_vector(alpha, real.power)).squaredNorm();
    sol.trace.push_back(q_next);
    sol.iterations = it;
    if (q_next > best_q) {
      best_q = q_next;
      best_alpha = alpha;
      best_theta = theta;
    }
    bool done = q > 0.0 ? (q_next - q) / q < outer.epsilon : q_next <= q;
    q = q_next;
    if (done) {
      sol.status = SolveStatus::kConverged;
      break;
    }
  }

  sol.alpha = best_alpha;
  sol.theta = best_theta;
  finalize_solution(real, sol);
  return sol;
}

}  // namespace

BeamformerSolution solve_spm_sdr(const ChannelRealization& real, const SdrConfig& cfg, const SolverConfig& outer,
                                 SdrDiagnostics* diagnostics) {
  cfg.validate();
  outer.validate();
  real.validate();

  SdrDiagnostics diag;
  Rng starts(outer.seed);
  BeamformerSolution best;
  for (int r = 0; r < outer.restarts; ++r) {
    RealVector alpha0 = RealVector::Zero(real.antennas());
    RealVector theta0 = RealVector::Zero(real.elements());
    if (r > 0) {
      Rng stream = starts.derive(static_cast<std::uint64_t>(r));
      alpha0 = sample_phases(real.antennas(), stream);
      theta0 = sample_phases(real.elements(), stream);
    }
    // Run 0 keeps the configured rounding stream; later runs get their own.
    Rng rng = r == 0 ? Rng(cfg.seed) : Rng(cfg.seed).derive(static_cast<std::uint64_t>(r));
    BeamformerSolution sol = sdr_run(real, cfg, outer, alpha0, theta0, rng, diag);
    if (r == 0 || sol.objective > best.objective) best = std::move(sol);
  }
  if (diagnostics) *diagnostics = std::move(diag);
  return best;
}

}  // namespace cewpt
