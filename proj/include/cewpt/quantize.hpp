#pragma once

#include "cewpt/solution.hpp"

#include <functional>

namespace cewpt {

/// Uniform b-bit phase codebook with cell midpoints (2l+1) pi / 2^b.
struct PhaseCodebook {
  int bits = 1;

  Index size() const { return Index{1} << bits; }
  RealVector phases() const;
  void validate() const;
};

/// Each phase is wrapped to [0, 2 pi) and replaced by the midpoint of its
/// half-open cell [2 pi l / 2^b, 2 pi (l+1) / 2^b).
RealVector project_codebook(const RealVector& theta, const PhaseCodebook& cb);

/// 2^{2b} / pi^2 * sin^2(pi / 2^b).
double prop2_bound(int bits);

/// Produces the channel for trial t. Must be deterministic in t.
using RealizationSource = std::function<ChannelRealization(std::uint64_t trial)>;

struct QuantizationEstimate {
  int bits = 1;
  double ratio = 0.0;      // sum Q_q / sum Q_op
  double stderr_ = 0.0;    // delta-method standard error of the ratio
  double mean_optimum = 0.0;
  double mean_quantized = 0.0;
  int trials = 0;
  int increases = 0;       // trials where quantization raised the objective
};

/// Monte Carlo estimate of E[Q_q] / E[Q_op] for several codebooks sharing
/// the same continuous solves. Trials run on `threads` workers; results do
/// not depend on the worker count.
std::vector<QuantizationEstimate> quantized_power_ratio(const RealizationSource& source, const SolverConfig& solver,
                                                        const std::vector<PhaseCodebook>& codebooks, int trials,
                                                        int threads = 1);

/// Single-codebook form.
QuantizationEstimate quantized_power_ratio(const RealizationSource& source, const SolverConfig& solver,
                                           const PhaseCodebook& cb, int trials, int threads = 1);

/// Ratio-of-means with its delta-method standard error.
struct RatioStat {
  double ratio = 0.0;
  double stderr_ = 0.0;
};
RatioStat ratio_of_means(const std::vector<double>& num, const std::vector<double>& den);

}  // namespace cewpt
