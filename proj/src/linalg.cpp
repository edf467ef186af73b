#include "cewpt/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cewpt {

namespace {

double principal_arg(Complex z) {
  if (z == Complex(0.0, 0.0)) return 0.0;
  double a = std::arg(z);
  // std::arg lands on (-pi, pi]; fold the upper end onto -pi.
  return a >= kPi ? -kPi : a;
}

}  // namespace

RealVector arg_phases(const ComplexVector& z) {
  RealVector out(z.size());
  for (Index i = 0; i < z.size(); ++i) out[i] = principal_arg(z[i]);
  return out;
}

ComplexVector unit_circle_exp(const RealVector& phases) {
  ComplexVector out(phases.size());
  for (Index i = 0; i < phases.size(); ++i) out[i] = std::polar(1.0, phases[i]);
  return out;
}

ComplexVector phase_align(const ComplexVector& z, double amplitude) {
  ComplexVector out(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    double mag = std::abs(z[i]);
    out[i] = mag > 0.0 ? z[i] * (amplitude / mag) : Complex(amplitude, 0.0);
  }
  return out;
}

double hermitian_defect(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

HermitianEig hermitian_eig(const ComplexMatrix& a, double tol) {
  require_dims(a.rows() == a.cols(), "hermitian_eig: matrix must be square");
  if (hermitian_defect(a) > tol) throw NonHermitian("hermitian_eig: input is not Hermitian");
  const Index n = a.rows();
  HermitianEig out;
  if (n == 0) return out;
  ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  // Eigen returns ascending order.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ComplexMatrix project_psd(const ComplexMatrix& a) {
  HermitianEig eig = hermitian_eig(a, 1e-8);
  RealVector clamped = eig.values.cwiseMax(0.0);
  return eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint();
}

double max_eigenvalue(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return hermitian_eig(a, 1e-8).values[0];
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix sample_cscg(Index rows, Index cols, Rng& rng) {
  const double sd = std::sqrt(0.5);
  ComplexMatrix out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      double re = rng.normal(sd);
      double im = rng.normal(sd);
      out(r, c) = Complex(re, im);
    }
  return out;
}

RealVector sample_phases(Index n, Rng& rng) {
  RealVector out(n);
  for (Index i = 0; i < n; ++i) out[i] = rng.uniform_phase();
  return out;
}

}  // namespace cewpt
