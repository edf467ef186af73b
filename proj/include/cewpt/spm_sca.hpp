#pragma once

#include "cewpt/solution.hpp"

namespace cewpt {

/// Closed-form maximiser of the linear minorant of ||H x||^2 at x_prev under
/// the constant-envelope constraint: sqrt(P/M) exp(j arg(H^H H x_prev)).
ComplexVector x_update(const ComplexMatrix& h, const ComplexVector& x_prev, double power);

/// Per-user reflected signals c_k = diag(row k of H_r) G x, as columns of an
/// N x K matrix, and the direct terms a_k = h_{d,k}^H x.
struct ReflectionTerms {
  ComplexMatrix c;  // N x K
  ComplexVector a;  // K
};

ReflectionTerms reflection_terms(const ChannelRealization& real, const ComplexVector& x);

/// sum_k |v^H c_k + a_k|^2.
double reflection_objective(const ReflectionTerms& terms, const ComplexVector& v);

/// exp(j arg(C1 v_prev + C2)) with C1 = sum c_k c_k^H and C2 = sum c_k conj(a_k).
/// The sums are applied in factored form, O(KN).
ComplexVector v_update(const ReflectionTerms& terms, const ComplexVector& v_prev);

/// Same update from explicit A_k = diag(conj(h_{r,k})) G matrices and direct rows.
ComplexVector v_update(const std::vector<ComplexMatrix>& a_k, const std::vector<ComplexVector>& h_dk,
                       const ComplexVector& x, const ComplexVector& v_prev);

/// Alternating SCA for sum-power maximisation. With restarts > 1 the best
/// of the independent runs is returned.
BeamformerSolution solve_spm_sca(const ChannelRealization& real, const SolverConfig& cfg);

/// One SCA run from the given starting phases.
BeamformerSolution solve_spm_sca_from(const ChannelRealization& real, const SolverConfig& cfg,
                                      const RealVector& alpha0, const RealVector& theta0);

/// Transmit-only SCA with the RIS phases held at `theta`.
BeamformerSolution solve_transmit_only(const ChannelRealization& real, const SolverConfig& cfg,
                                       const RealVector& theta);

}  // namespace cewpt
