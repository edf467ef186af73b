#pragma once

#include "cewpt/quantize.hpp"
#include "cewpt/sdr.hpp"
#include "cewpt/spmc_admm.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace cewpt {

/// One aggregated statistic at one grid point.
struct ExperimentResult {
  std::string experiment;
  nlohmann::ordered_json params;  // full parameter tuple of the grid point
  std::string statistic;
  double value = 0.0;
  double stderr_ = 0.0;
  int trials = 1;
  double ms = 0.0;  // wall-clock, only filled when timing is requested
};

/// Settings shared by every sweep.
struct RunOptions {
  std::uint64_t seed = 1;
  int threads = 1;      // <= 0: hardware concurrency
  bool timing = false;  // fill `ms`; off by default so outputs are byte-stable
};

/// Mean and standard error of the mean.
struct MeanStat {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanStat mean_stat(const std::vector<double>& samples);

/// Seed of trial `trial` at grid point `point`.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial);

struct ScalingConfig {
  Index antennas = 4;
  Index users = 4;
  double rho_g = 1.0;
  double rho_h = 1.0;
  double power = 1.0;
  std::vector<Index> elements{25, 50, 100, 200};
  ChannelModel model = ChannelModel::kLosG;
  int trials = 100;
  int restarts = 1;
  double band_tolerance = 0.1;
};

/// Per N: mean Q_op / N^2 (statistic "q_over_n2"). Params carry the band
/// [pi/4 c, c] with c = rho_g^2 rho_h^2 P M.
std::vector<ExperimentResult> scaling_law_sweep(const ScalingConfig& cfg, const RunOptions& run);

/// Whether the largest-N row lies in [pi/4 c (1 - tol), c (1 + tol)].
bool scaling_band_holds(const std::vector<ExperimentResult>& rows, double tolerance);

struct WishartConfig {
  Index users = 4;
  Index elements = 500;
  double rho_h = 1.0;
  int trials = 200;
};

/// Mean of lambda_max(H_r^H H_r) / N over Rayleigh draws (statistic "lambda1_over_n").
ExperimentResult wishart_lambda_check(const WishartConfig& cfg, const RunOptions& run);

struct QuantizationConfig {
  std::vector<int> bits{1, 2};
  std::vector<Index> elements{50, 100, 200};
  std::vector<ChannelModel> models{ChannelModel::kLosG};
  Index antennas = 4;
  Index users = 4;
  bool normalize_hr = false;
  int trials = 200;
  int restarts = 1;
};

/// Per (model, N, b): ratio-of-means Delta (statistic "delta"); per b a
/// reference row (statistic "prop2_bound").
std::vector<ExperimentResult> quantization_sweep(const QuantizationConfig& cfg, const RunOptions& run);

struct ComparisonConfig {
  std::vector<Index> antennas{4, 8};
  std::vector<Index> elements{8, 16};
  Index users = 4;
  int trials = 20;
  ScenarioConfig scenario;  // geometry; antennas/users are overridden per grid point
  int sca_restarts = 1;
  SdrConfig sdr;
};

/// Paired SCA / SDR / no-RIS / random-RIS objectives on scenario channels.
std::vector<ExperimentResult> algorithm_comparison(const ComparisonConfig& cfg, const RunOptions& run);

struct FairnessConfig {
  std::vector<double> gammas{0.0, 0.2, 0.5, 0.8};
  std::vector<Index> elements{16};
  Index antennas = 4;
  Index users = 4;
  int trials = 50;
  ScenarioConfig scenario;
  AdmmConfig admm;
  int sca_restarts = 5;
};

/// Per draw: Q_MM estimate, SPMC at each gamma with p_k = eta gamma Q_MM and
/// the SPM-SCA bound. QoS-violating draws are excluded from the means and
/// counted.
std::vector<ExperimentResult> fairness_sweep(const FairnessConfig& cfg, const RunOptions& run);

/// Split N elements across the scenario surfaces, first surfaces taking the
/// remainder.
std::vector<int> split_elements(Index total, std::size_t surfaces);

/// CSV with header experiment,param_json,statistic,value,stderr,trials,ms.
void write_csv(std::ostream& out, const std::vector<ExperimentResult>& rows);
std::vector<ExperimentResult> read_csv(std::istream& in);

/// Line plot of `statistic` against `x_key`, one series per remaining
/// parameter combination. Returns false when no row matches.
bool write_svg(std::ostream& out, const std::vector<ExperimentResult>& rows, const std::string& statistic,
               const std::string& x_key);

}  // namespace cewpt
