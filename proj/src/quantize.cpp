#include "cewpt/quantize.hpp"

#include "cewpt/parallel.hpp"
#include "cewpt/spm_sca.hpp"

#include <cmath>

namespace cewpt {

void PhaseCodebook::validate() const {
  if (bits < 1 || bits > 30) throw ConfigError("codebook: phase bits must be in [1, 30]");
}

RealVector PhaseCodebook::phases() const {
  validate();
  const Index levels = size();
  RealVector out(levels);
  for (Index l = 0; l < levels; ++l) out[l] = (2.0 * static_cast<double>(l) + 1.0) * kPi / static_cast<double>(levels);
  return out;
}

RealVector project_codebook(const RealVector& theta, const PhaseCodebook& cb) {
  cb.validate();
  const double levels = static_cast<double>(cb.size());
  const double two_pi = 2.0 * kPi;
  RealVector out(theta.size());
  for (Index n = 0; n < theta.size(); ++n) {
    double w = std::fmod(theta[n], two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;  // fmod can round a tiny negative up to 2 pi
    double l = std::floor(w * levels / two_pi);
    l = std::min(std::max(l, 0.0), levels - 1.0);
    out[n] = (2.0 * l + 1.0) * kPi / levels;
  }
  return out;
}

double prop2_bound(int bits) {
  if (bits < 1) throw ConfigError("prop2_bound: phase bits must be >= 1");
  const double levels = std::ldexp(1.0, bits);
  const double s = std::sin(kPi / levels);
  return levels * levels / (kPi * kPi) * s * s;
}

RatioStat ratio_of_means(const std::vector<double>& num, const std::vector<double>& den) {
  require_dims(num.size() == den.size(), "ratio_of_means: samples must be paired");
  RatioStat out;
  const std::size_t n = num.size();
  if (n == 0) return out;
  double sn = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sn += num[i];
    sd += den[i];
  }
  if (sd == 0.0) return out;
  const double mn = sn / n, md = sd / n;
  out.ratio = mn / md;
  if (n > 1) {
    // Linearised residuals r_i = (num_i - R den_i) / mean(den).
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = (num[i] - out.ratio * den[i]) / md;
      ss += r * r;
    }
    out.stderr_ = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return out;
}

std::vector<QuantizationEstimate> quantized_power_ratio(const RealizationSource& source, const SolverConfig& solver,
                                                        const std::vector<PhaseCodebook>& codebooks, int trials,
                                                        int threads) {
  if (trials < 1) throw ConfigError("quantized_power_ratio: trials must be >= 1");
  for (const auto& cb : codebooks) cb.validate();
  solver.validate();

  const std::size_t nt = static_cast<std::size_t>(trials);
  std::vector<double> optimum(nt);
  std::vector<std::vector<double>> quantized(codebooks.size(), std::vector<double>(nt));

  parallel_for(nt, threads, [&](std::size_t t) {
    ChannelRealization real = source(t);
    BeamformerSolution sol = solve_spm_sca(real, solver);
    optimum[t] = sol.objective;
    for (std::size_t c = 0; c < codebooks.size(); ++c)
      quantized[c][t] = sum_power(real, sol.alpha, project_codebook(sol.theta, codebooks[c]));
  });

  std::vector<QuantizationEstimate> out;
  for (std::size_t c = 0; c < codebooks.size(); ++c) {
    QuantizationEstimate e;
    e.bits = codebooks[c].bits;
    e.trials = trials;
    RatioStat rs = ratio_of_means(quantized[c], optimum);
    e.ratio = rs.ratio;
    e.stderr_ = rs.stderr_;
    double so = 0.0, sq = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      so += optimum[t];
      sq += quantized[c][t];
      if (quantized[c][t] > optimum[t] * (1.0 + 1e-12)) ++e.increases;
    }
    e.mean_optimum = so / nt;
    e.mean_quantized = sq / nt;
    out.push_back(e);
  }
  return out;
}

QuantizationEstimate quantized_power_ratio(const RealizationSource& source, const SolverConfig& solver,
                                           const PhaseCodebook& cb, int trials, int threads) {
  return quantized_power_ratio(source, solver, std::vector<PhaseCodebook>{cb}, trials, threads)[0];
}

}  // namespace cewpt
