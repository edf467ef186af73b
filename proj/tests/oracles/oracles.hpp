#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond std::complex so that agreement is meaningful.

#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = std::vector<std::vector<cplx>>;  // row-major
using Vec = std::vector<cplx>;

/// Channel blocks of a small instance, row-major.
struct Instance {
  Mat hd;  // K x M
  Mat hr;  // K x N
  Mat g;   // N x M
  double power = 1.0;
};

/// sum_k |(hr_k diag(e^{j theta}) G + hd_k) x|^2 with x = sqrt(P/M) e^{j alpha}.
double sum_power(const Instance& in, const std::vector<double>& alpha, const std::vector<double>& theta);

struct GridResult {
  double value = 0.0;
  std::vector<double> alpha, theta;
};

/// Exhaustive search over `levels` uniform phases per antenna and element.
/// The first transmit phase is pinned to 0 (the objective ignores a common
/// rotation of x, and the grid is closed under it).
GridResult grid_search(const Instance& in, int levels);

/// Distance from z to {e : |h^H e|^2 >= tau}, minimised over `samples`
/// boundary phases nu of h^H e = sqrt(tau) e^{j nu}.
double halfspace_distance_grid(const Vec& h, double tau, const Vec& z, int samples);

/// max tr(C X) s.t. diag(X) = 1, X PSD, by Burer-Monteiro row updates on
/// X = V V^H with unit rows of width n, best of `restarts` random starts.
double maxcut_sdp_bm(const Mat& c, int restarts, std::uint64_t seed);

/// Closed form for n = 2: C11 + C22 + 2 |C12|.
double maxcut_sdp_2x2(const Mat& c);

}  // namespace oracle
