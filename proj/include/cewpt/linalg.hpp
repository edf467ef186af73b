#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace cewpt {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonHermitian : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws DimensionMismatch with `what` when `ok` is false.
inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

/// Principal argument of each entry in [-pi, pi); arg(0) = 0.
RealVector arg_phases(const ComplexVector& z);

/// exp(j * phases), entrywise.
ComplexVector unit_circle_exp(const RealVector& phases);

/// amplitude * exp(j * arg(z)). Zero entries map to +amplitude.
ComplexVector phase_align(const ComplexVector& z, double amplitude = 1.0);

struct HermitianEig {
  RealVector values;      // descending
  ComplexMatrix vectors;  // column i pairs with values[i]
};

/// Largest |A - A^H| entry relative to the largest |A| entry (0 for A = 0).
double hermitian_defect(const ComplexMatrix& a);

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// The symmetry check is relative: hermitian_defect(a) must not exceed `tol`.
HermitianEig hermitian_eig(const ComplexMatrix& a, double tol = 1e-10);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped to 0).
ComplexMatrix project_psd(const ComplexMatrix& a);

/// Largest eigenvalue of a Hermitian PSD Gram-type matrix.
double max_eigenvalue(const ComplexMatrix& a);

/// SplitMix64 finaliser; used to derive independent stream seeds from a
/// master seed and a counter.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter);

/// Seedable generator passed explicitly to every stochastic routine.
/// Backed by std::mt19937_64; not thread-safe, one instance per thread.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent generator for stream `counter`, derived from this seed.
  Rng derive(std::uint64_t counter) const { return Rng(mix_seed(seed_, counter)); }

  double normal(double stddev) { return std::normal_distribution<double>(0.0, stddev)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double uniform_phase() { return uniform(-kPi, kPi); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// rows x cols matrix of i.i.d. CN(0,1): real and imaginary parts N(0, 1/2).
ComplexMatrix sample_cscg(Index rows, Index cols, Rng& rng);

/// Vector of i.i.d. phases uniform on [-pi, pi).
RealVector sample_phases(Index n, Rng& rng);

}  // namespace cewpt
