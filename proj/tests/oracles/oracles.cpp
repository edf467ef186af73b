#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

double sum_power(const Instance& in, const std::vector<double>& alpha, const std::vector<double>& theta) {
  const std::size_t k_users = in.hd.size(), m = alpha.size(), n = theta.size();
  const double amp = std::sqrt(in.power / static_cast<double>(m));
  Vec x(m), gx(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) x[i] = std::polar(amp, alpha[i]);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < m; ++i) gx[r] += in.g[r][i] * x[i];
  double q = 0.0;
  for (std::size_t k = 0; k < k_users; ++k) {
    cplx y = 0.0;
    for (std::size_t i = 0; i < m; ++i) y += in.hd[k][i] * x[i];
    for (std::size_t r = 0; r < n; ++r) y += in.hr[k][r] * std::polar(1.0, theta[r]) * gx[r];
    q += std::norm(y);
  }
  return q;
}

GridResult grid_search(const Instance& in, int levels) {
  const std::size_t m = in.hd.empty() ? 0 : in.hd[0].size();
  const std::size_t n = in.g.size();
  const std::size_t free_vars = (m > 0 ? m - 1 : 0) + n;
  std::vector<double> phases(static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) phases[static_cast<std::size_t>(l)] = kTwoPi * l / levels;

  GridResult best;
  best.value = -1.0;
  std::vector<int> idx(free_vars, 0);
  std::vector<double> alpha(m, 0.0), theta(n, 0.0);
  for (;;) {
    for (std::size_t i = 1; i < m; ++i) alpha[i] = phases[static_cast<std::size_t>(idx[i - 1])];
    for (std::size_t r = 0; r < n; ++r) theta[r] = phases[static_cast<std::size_t>(idx[m - 1 + r])];
    double q = sum_power(in, alpha, theta);
    if (q > best.value) {
      best.value = q;
      best.alpha = alpha;
      best.theta = theta;
    }
    std::size_t d = 0;
    while (d < free_vars && ++idx[d] == levels) idx[d++] = 0;
    if (d == free_vars) break;
  }
  return best;
}

double halfspace_distance_grid(const Vec& h, double tau, const Vec& z, int samples) {
  cplx s = 0.0;
  double hn2 = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    s += std::conj(h[i]) * z[i];
    hn2 += std::norm(h[i]);
  }
  if (std::norm(s) >= tau) return 0.0;
  // The closest point with h^H e = w is z + h (w - s) / ||h||^2, at distance
  // |w - s| / ||h||.
  double best = 1e300;
  for (int i = 0; i < samples; ++i) {
    cplx w = std::polar(std::sqrt(tau), kTwoPi * i / samples);
    best = std::min(best, std::abs(w - s) / std::sqrt(hn2));
  }
  return best;
}

double maxcut_sdp_2x2(const Mat& c) { return c[0][0].real() + c[1][1].real() + 2.0 * std::abs(c[0][1]); }

double maxcut_sdp_bm(const Mat& c, int restarts, std::uint64_t seed) {
  const std::size_t n = c.size();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = -1e300;
  for (int r = 0; r < restarts; ++r) {
    std::vector<Vec> v(n, Vec(n));
    for (auto& row : v) {
      double norm = 0.0;
      for (auto& e : row) {
        e = cplx(normal(gen), normal(gen));
        norm += std::norm(e);
      }
      for (auto& e : row) e /= std::sqrt(norm);
    }
    auto objective = [&] {
      double t = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          cplx ip = 0.0;  // X_ji = <v_j, v_i>
          for (std::size_t d = 0; d < n; ++d) ip += v[j][d] * std::conj(v[i][d]);
          t += (c[i][j] * ip).real();
        }
      return t;
    };
    double prev = objective();
    for (int sweep = 0; sweep < 5000; ++sweep) {
      // Row i enters the objective through 2 Re sum_d conj(v_i[d]) (sum_{j != i} C_ij v_j[d]).
      for (std::size_t i = 0; i < n; ++i) {
        Vec acc(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
          if (j != i)
            for (std::size_t d = 0; d < n; ++d) acc[d] += c[i][j] * v[j][d];
        double norm = 0.0;
        for (auto& e : acc) norm += std::norm(e);
        if (norm > 0.0)
          for (std::size_t d = 0; d < n; ++d) v[i][d] = acc[d] / std::sqrt(norm);
      }
      double cur = objective();
      if (cur - prev <= 1e-15 * std::max(1.0, std::abs(cur))) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    best = std::max(best, prev);
  }
  return best;
}

}  // namespace oracle
