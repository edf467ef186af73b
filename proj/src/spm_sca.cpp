#include "cewpt/spm_sca.hpp"

#include <cmath>

namespace cewpt {

namespace {

bool stalled(double previous, double current, double epsilon) {
  if (previous <= 0.0) return current <= previous;
  return (current - previous) / previous < epsilon;
}

}  // namespace

ComplexVector x_update(const ComplexMatrix& h, const ComplexVector& x_prev, double power) {
  require_dims(h.cols() == x_prev.size(), "x_update: H columns must match x length");
  const double amp = x_prev.size() > 0 ? std::sqrt(power / static_cast<double>(x_prev.size())) : 0.0;
  ComplexVector bx = h.adjoint() * (h * x_prev);
  return phase_align(bx, amp);
}

ReflectionTerms reflection_terms(const ChannelRealization& real, const ComplexVector& x) {
  require_dims(x.size() == real.antennas(), "reflection_terms: x must have M entries");
  ReflectionTerms t;
  ComplexVector gx = real.g * x;
  t.c = (real.hr.transpose().array().colwise() * gx.array()).matrix();
  t.a = real.hd * x;
  return t;
}

double reflection_objective(const ReflectionTerms& terms, const ComplexVector& v) {
  require_dims(v.size() == terms.c.rows(), "reflection_objective: v must have N entries");
  ComplexVector y = terms.c.adjoint() * v;  // conj(v^H c_k)
  double q = 0.0;
  for (Index k = 0; k < y.size(); ++k) q += std::norm(std::conj(y[k]) + terms.a[k]);
  return q;
}

ComplexVector v_update(const ReflectionTerms& terms, const ComplexVector& v_prev) {
  require_dims(v_prev.size() == terms.c.rows(), "v_update: v must have N entries");
  require_dims(terms.a.size() == terms.c.cols(), "v_update: one direct term per user");
  // C1 v = sum_k c_k (c_k^H v),  C2 = sum_k c_k conj(a_k)
  ComplexVector weights = terms.c.adjoint() * v_prev + terms.a.conjugate();
  return phase_align(terms.c * weights);
}

ComplexVector v_update(const std::vector<ComplexMatrix>& a_k, const std::vector<ComplexVector>& h_dk,
                       const ComplexVector& x, const ComplexVector& v_prev) {
  require_dims(a_k.size() == h_dk.size(), "v_update: one A_k per direct channel");
  ReflectionTerms t;
  const Index n = v_prev.size();
  t.c.resize(n, static_cast<Index>(a_k.size()));
  t.a.resize(static_cast<Index>(a_k.size()));
  for (std::size_t k = 0; k < a_k.size(); ++k) {
    require_dims(a_k[k].rows() == n && a_k[k].cols() == x.size(), "v_update: A_k must be N x M");
    require_dims(h_dk[k].size() == x.size(), "v_update: h_dk must have M entries");
    t.c.col(static_cast<Index>(k)) = a_k[k] * x;
    t.a[static_cast<Index>(k)] = h_dk[k].dot(x);  // h_dk^H x
  }
  return v_update(t, v_prev);
}

BeamformerSolution solve_spm_sca_from(const ChannelRealization& real, const SolverConfig& cfg,
                                      const RealVector& alpha0, const RealVector& theta0) {
  cfg.validate();
  real.validate();
  require_dims(alpha0.size() == real.antennas(), "solve_spm_sca: alpha0 must have M entries");
  require_dims(theta0.size() == real.elements(), "solve_spm_sca: theta0 must have N entries");

  const bool has_ris = real.elements() > 0;
  ComplexVector x = transmit_vector(alpha0, real.power);
  ComplexVector v = unit_circle_exp(-theta0);
  RealVector theta = theta0;
  ComplexMatrix h = composite_channel(real, theta);
  double q = (h * x).squaredNorm();

  BeamformerSolution sol;
  sol.trace.push_back(q);
  sol.status = SolveStatus::kMaxIters;
  for (int it = 1; it <= cfg.max_outer_iters; ++it) {
    x = x_update(h, x, real.power);
    if (has_ris) {
      v = v_update(reflection_terms(real, x), v);
      theta = arg_phases(v.conjugate());
      h = composite_channel(real, theta);
    }
    double q_next = (h * x).squaredNorm();
    sol.trace.push_back(q_next);
    sol.iterations = it;
    bool done = stalled(q, q_next, cfg.epsilon);
    q = q_next;
    if (done) {
      sol.status = SolveStatus::kConverged;
      break;
    }
  }
  sol.alpha = arg_phases(x);
  sol.theta = theta;
  finalize_solution(real, sol);
  return sol;
}

BeamformerSolution solve_spm_sca(const ChannelRealization& real, const SolverConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  BeamformerSolution best;
  bool have = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    RealVector alpha0 = RealVector::Zero(real.antennas());
    RealVector theta0 = RealVector::Zero(real.elements());
    if (r > 0) {
      Rng stream = rng.derive(static_cast<std::uint64_t>(r));
      alpha0 = sample_phases(real.antennas(), stream);
      theta0 = sample_phases(real.elements(), stream);
    }
    BeamformerSolution sol = solve_spm_sca_from(real, cfg, alpha0, theta0);
    if (!have || sol.objective > best.objective) {
      best = std::move(sol);
      have = true;
    }
  }
  return best;
}

BeamformerSolution solve_transmit_only(const ChannelRealization& real, const SolverConfig& cfg,
                                       const RealVector& theta) {
  cfg.validate();
  ComplexMatrix h = composite_channel(real, theta);
  ComplexVector x = transmit_vector(RealVector::Zero(real.antennas()), real.power);
  double q = (h * x).squaredNorm();
  BeamformerSolution sol;
  sol.trace.push_back(q);
  for (int it = 1; it <= cfg.max_outer_iters; ++it) {
    x = x_update(h, x, real.power);
    double q_next = (h * x).squaredNorm();
    sol.trace.push_back(q_next);
    sol.iterations = it;
    bool done = stalled(q, q_next, cfg.epsilon);
    q = q_next;
    if (done) {
      sol.status = SolveStatus::kConverged;
      break;
    }
  }
  sol.alpha = arg_phases(x);
  sol.theta = theta;
  finalize_solution(real, sol);
  return sol;
}

}  // namespace cewpt
