#include "cewpt/experiments.hpp"

#include "cewpt/parallel.hpp"
#include "cewpt/spm_sca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace cewpt {

using nlohmann::ordered_json;

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

ExperimentResult row(const std::string& experiment, const ordered_json& params, const std::string& statistic,
                     double value, double stderr_, int trials, double ms) {
  return {experiment, params, statistic, value, stderr_, std::max(trials, 1), ms};
}

ExperimentResult row(const std::string& experiment, const ordered_json& params, const std::string& statistic,
                     const MeanStat& s, int trials, double ms) {
  return row(experiment, params, statistic, s.mean, s.stderr_, trials, ms);
}

ChannelRealization scenario_draw(ScenarioConfig sc, Index antennas, Index users, Index elements,
                                 std::uint64_t seed) {
  sc.antennas = static_cast<int>(antennas);
  sc.users = static_cast<int>(users);
  std::vector<RisConfig> surfaces = default_surfaces(sc, split_elements(elements, 2));
  Rng rng(seed);
  return make_scenario(sc, surfaces, rng);
}

double min_coeff_or_zero(const RealVector& v) { return v.size() > 0 ? v.minCoeff() : 0.0; }

}  // namespace

MeanStat mean_stat(const std::vector<double>& samples) {
  MeanStat out;
  const std::size_t n = samples.size();
  if (n == 0) return out;
  double s = 0.0;
  for (double x : samples) s += x;
  out.mean = s / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  return mix_seed(mix_seed(master, point), trial);
}

std::vector<int> split_elements(Index total, std::size_t surfaces) {
  if (surfaces == 0) throw ConfigError("split_elements: need at least one surface");
  if (total < 0) throw ConfigError("split_elements: element count must be >= 0");
  std::vector<int> out(surfaces, static_cast<int>(total / static_cast<Index>(surfaces)));
  for (std::size_t i = 0; i < static_cast<std::size_t>(total % static_cast<Index>(surfaces)); ++i) ++out[i];
  return out;
}

// ---------------------------------------------------------------- scaling

std::vector<ExperimentResult> scaling_law_sweep(const ScalingConfig& cfg, const RunOptions& run) {
  if (cfg.trials < 1) throw ConfigError("scaling: trials must be >= 1");
  const double c = cfg.rho_g * cfg.rho_g * cfg.rho_h * cfg.rho_h * cfg.power * static_cast<double>(cfg.antennas);
  SolverConfig solver;
  solver.restarts = cfg.restarts;

  std::vector<ExperimentResult> out;
  for (std::size_t p = 0; p < cfg.elements.size(); ++p) {
    const Index n = cfg.elements[p];
    if (n < 1) throw ConfigError("scaling: element counts must be >= 1");
    Stopwatch clock(run.timing);
    std::vector<double> ratio(static_cast<std::size_t>(cfg.trials));
    parallel_for(ratio.size(), run.threads, [&](std::size_t t) {
      IdealChannelSpec spec{cfg.antennas, cfg.users, n, cfg.model, cfg.rho_g, cfg.rho_h, false, cfg.power};
      const std::uint64_t seed = trial_seed(run.seed, p, t);
      Rng rng(seed);
      ChannelRealization real = make_ideal(spec, rng);
      SolverConfig sc = solver;
      sc.seed = mix_seed(seed, 1);
      ratio[t] = solve_spm_sca(real, sc).objective / (static_cast<double>(n) * static_cast<double>(n));
    });
    ordered_json params{{"N", n},
                        {"M", cfg.antennas},
                        {"K", cfg.users},
                        {"model", to_string(cfg.model)},
                        {"rho_g", cfg.rho_g},
                        {"rho_h", cfg.rho_h},
                        {"P", cfg.power},
                        {"restarts", cfg.restarts},
                        {"lower_bound", kPi / 4.0 * c},
                        {"upper_bound", c}};
    out.push_back(row("scaling", params, "q_over_n2", mean_stat(ratio), cfg.trials, clock.ms()));
  }
  return out;
}

bool scaling_band_holds(const std::vector<ExperimentResult>& rows, double tolerance) {
  const ExperimentResult* last = nullptr;
  for (const auto& r : rows)
    if (r.statistic == "q_over_n2" && (!last || r.params.at("N").get<Index>() > last->params.at("N").get<Index>()))
      last = &r;
  if (!last) return false;
  double lo = last->params.at("lower_bound").get<double>();
  double hi = last->params.at("upper_bound").get<double>();
  return last->value >= lo * (1.0 - tolerance) && last->value <= hi * (1.0 + tolerance);
}

// ---------------------------------------------------------------- wishart

ExperimentResult wishart_lambda_check(const WishartConfig& cfg, const RunOptions& run) {
  if (cfg.trials < 1) throw ConfigError("wishart: trials must be >= 1");
  if (cfg.users < 1 || cfg.elements < 1) throw ConfigError("wishart: K and N must be >= 1");
  Stopwatch clock(run.timing);
  std::vector<double> stat(static_cast<std::size_t>(cfg.trials));
  parallel_for(stat.size(), run.threads, [&](std::size_t t) {
    Rng rng(trial_seed(run.seed, 0, t));
    ComplexMatrix hr = cfg.rho_h * sample_cscg(cfg.users, cfg.elements, rng);
    // K x K Gram shares its nonzero spectrum with H_r^H H_r.
    stat[t] = max_eigenvalue(hr * hr.adjoint()) / static_cast<double>(cfg.elements);
  });
  ordered_json params{{"N", cfg.elements}, {"K", cfg.users}, {"rho_h", cfg.rho_h}, {"limit", cfg.rho_h * cfg.rho_h}};
  return row("wishart", params, "lambda1_over_n", mean_stat(stat), cfg.trials, clock.ms());
}

// ----------------------------------------------------------- quantization

std::vector<ExperimentResult> quantization_sweep(const QuantizationConfig& cfg, const RunOptions& run) {
  if (cfg.trials < 1) throw ConfigError("quantization: trials must be >= 1");
  std::vector<PhaseCodebook> books;
  for (int b : cfg.bits) {
    PhaseCodebook cb{b};
    cb.validate();
    books.push_back(cb);
  }
  SolverConfig solver;
  solver.restarts = cfg.restarts;

  std::vector<ExperimentResult> out;
  std::uint64_t point = 0;
  for (ChannelModel model : cfg.models) {
    for (Index n : cfg.elements) {
      if (n < 1) throw ConfigError("quantization: element counts must be >= 1");
      Stopwatch clock(run.timing);
      const std::uint64_t grid = point++;
      RealizationSource source = [&, grid, n, model](std::uint64_t t) {
        IdealChannelSpec spec{cfg.antennas, cfg.users, n, model, 1.0, 1.0, cfg.normalize_hr, 1.0};
        Rng rng(trial_seed(run.seed, grid, t));
        return make_ideal(spec, rng);
      };
      std::vector<QuantizationEstimate> est = quantized_power_ratio(source, solver, books, cfg.trials, run.threads);
      const double ms = clock.ms();
      for (const auto& e : est) {
        ordered_json params{{"N", n},
                            {"M", cfg.antennas},
                            {"K", cfg.users},
                            {"b", e.bits},
                            {"model", to_string(model)},
                            {"normalize_hr", cfg.normalize_hr},
                            {"estimator", "ratio_of_means"}};
        out.push_back(row("quantization", params, "delta", e.ratio, e.stderr_, cfg.trials, ms));
        out.push_back(row("quantization", params, "quantized_above_optimum", e.increases, 0.0, cfg.trials, 0.0));
      }
    }
  }
  for (int b : cfg.bits) {
    ordered_json params{{"b", b}, {"reference", "asymptotic_lower_bound"}};
    const double bound = prop2_bound(b);
    out.push_back(row("quantization", params, "prop2_bound", bound, 0.0, 1, 0.0));
    out.push_back(row("quantization", params, "prop2_bound_db", 10.0 * std::log10(bound), 0.0, 1, 0.0));
  }
  return out;
}

// ------------------------------------------------------------- comparison

std::vector<ExperimentResult> algorithm_comparison(const ComparisonConfig& cfg, const RunOptions& run) {
  if (cfg.trials < 1) throw ConfigError("comparison: trials must be >= 1");
  cfg.sdr.validate();

  std::vector<ExperimentResult> out;
  std::uint64_t point = 0;
  for (Index m : cfg.antennas) {
    for (Index n : cfg.elements) {
      const std::uint64_t grid = point++;
      const std::size_t nt = static_cast<std::size_t>(cfg.trials);
      std::vector<double> sca(nt), sdr(nt), none(nt), random(nt), sca_ms(nt), sdr_ms(nt);
      std::vector<int> random_above(nt, 0);
      Stopwatch clock(run.timing);

      parallel_for(nt, run.threads, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(run.seed, grid, t);
        ChannelRealization real = scenario_draw(cfg.scenario, m, cfg.users, n, seed);

        SolverConfig sc;
        sc.restarts = cfg.sca_restarts;
        sc.seed = mix_seed(seed, 1);
        Stopwatch sca_clock(run.timing);
        BeamformerSolution s1 = solve_spm_sca(real, sc);
        sca_ms[t] = sca_clock.ms();
        sca[t] = s1.objective;

        SdrConfig dc = cfg.sdr;
        dc.seed = mix_seed(seed, 2);
        Stopwatch sdr_clock(run.timing);
        sdr[t] = solve_spm_sdr(real, dc, SolverConfig{}).objective;
        sdr_ms[t] = sdr_clock.ms();

        ChannelRealization bare = make_realization(real.hd, ComplexMatrix::Zero(real.users(), 0),
                                                   ComplexMatrix::Zero(0, real.antennas()), RealVector(0),
                                                   real.power, real.efficiency);
        none[t] = solve_transmit_only(bare, SolverConfig{}, RealVector(0)).objective;

        Rng phase_rng(mix_seed(seed, 3));
        RealVector theta = sample_phases(real.elements(), phase_rng);
        random[t] = solve_transmit_only(real, SolverConfig{}, theta).objective;
        random_above[t] = random[t] > sca[t] ? 1 : 0;
      });

      ordered_json params{{"M", m}, {"N", n}, {"K", cfg.users}, {"sca_restarts", cfg.sca_restarts},
                          {"randomizations", cfg.sdr.randomizations}};
      const double ms = clock.ms();
      out.push_back(row("comparison", params, "sca_sum_power", mean_stat(sca), cfg.trials, ms));
      out.push_back(row("comparison", params, "sdr_sum_power", mean_stat(sdr), cfg.trials, 0.0));
      out.push_back(row("comparison", params, "no_ris_sum_power", mean_stat(none), cfg.trials, 0.0));
      out.push_back(row("comparison", params, "random_ris_sum_power", mean_stat(random), cfg.trials, 0.0));
      RatioStat ratio = ratio_of_means(sdr, sca);
      out.push_back(row("comparison", params, "sdr_sca_gap", std::abs(1.0 - ratio.ratio), ratio.stderr_, cfg.trials,
                        0.0));
      int above = 0;
      for (int a : random_above) above += a;
      out.push_back(row("comparison", params, "random_above_sca", above, 0.0, cfg.trials, 0.0));
      if (run.timing) {
        out.push_back(row("comparison", params, "sca_ms", mean_stat(sca_ms), cfg.trials, 0.0));
        out.push_back(row("comparison", params, "sdr_ms", mean_stat(sdr_ms), cfg.trials, 0.0));
      }
    }
  }
  return out;
}

// --------------------------------------------------------------- fairness

std::vector<ExperimentResult> fairness_sweep(const FairnessConfig& cfg, const RunOptions& run) {
  if (cfg.trials < 1) throw ConfigError("fairness: trials must be >= 1");
  for (double g : cfg.gammas)
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("fairness: gamma values must lie in [0, 1]");
  cfg.admm.validate();

  struct Draw {
    double qmm = 0.0;
    double sca = 0.0;
    bool polished = false;  // an SCA run warm-started at an SPMC point beat the restarts
    std::vector<double> sum, min_power, violation;
    std::vector<bool> violated;
  };

  std::vector<ExperimentResult> out;
  const std::size_t ng = cfg.gammas.size();
  for (std::size_t p = 0; p < cfg.elements.size(); ++p) {
    const Index n = cfg.elements[p];
    const std::size_t nt = static_cast<std::size_t>(cfg.trials);
    std::vector<Draw> draws(nt);
    Stopwatch clock(run.timing);

    parallel_for(nt, run.threads, [&](std::size_t t) {
      const std::uint64_t seed = trial_seed(run.seed, p, t);
      ChannelRealization real = scenario_draw(cfg.scenario, cfg.antennas, cfg.users, n, seed);
      SolverConfig sc;
      sc.restarts = cfg.sca_restarts;
      sc.seed = mix_seed(seed, 1);

      Draw& d = draws[t];
      d.sca = solve_spm_sca(real, sc).objective;
      d.qmm = estimate_qmm(real, cfg.admm, sc).value;
      for (double gamma : cfg.gammas) {
        QosSpec qos{RealVector::Constant(real.users(), real.efficiency * gamma * d.qmm), real.efficiency};
        BeamformerSolution s = solve_spmc(real, qos, cfg.admm);
        d.sum.push_back(s.objective);
        d.min_power.push_back(min_coeff_or_zero(s.user_powers));
        d.violation.push_back(s.max_violation);
        d.violated.push_back(s.status == SolveStatus::kQosViolated);
        // The unconstrained bound is the best SCA point found, including runs started
        // from each constrained solution.
        BeamformerSolution warm = solve_spm_sca_from(real, sc, s.alpha, s.theta);
        if (warm.objective > d.sca * (1.0 + 1e-6)) d.polished = true;
        if (warm.objective > d.sca) {
          d.sca = warm.objective;
        }
      }
    });

    const double ms = clock.ms();
    std::vector<double> sca_all(nt), qmm_all(nt);
    int polished = 0;
    for (std::size_t t = 0; t < nt; ++t) {
      sca_all[t] = draws[t].sca;
      qmm_all[t] = draws[t].qmm;
      polished += draws[t].polished ? 1 : 0;
    }
    ordered_json base{{"N", n}, {"M", cfg.antennas}, {"K", cfg.users}, {"sca_restarts", cfg.sca_restarts}};
    out.push_back(row("fairness", base, "sca_sum_power", mean_stat(sca_all), cfg.trials, ms));
    out.push_back(row("fairness", base, "qmm", mean_stat(qmm_all), cfg.trials, 0.0));
    out.push_back(row("fairness", base, "sca_warm_start_improved", polished, 0.0, cfg.trials, 0.0));

    for (std::size_t g = 0; g < ng; ++g) {
      std::vector<double> sum, min_power, sca_paired;
      int excluded = 0, above = 0;
      double worst_kept = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        const Draw& d = draws[t];
        if (d.sum[g] > d.sca * (1.0 + 1e-9)) ++above;
        if (d.violated[g]) {
          ++excluded;
          continue;
        }
        worst_kept = std::max(worst_kept, d.violation[g]);
        sum.push_back(d.sum[g]);
        min_power.push_back(d.min_power[g]);
        sca_paired.push_back(d.sca);
      }
      ordered_json params = base;
      params["gamma"] = cfg.gammas[g];
      const int kept = static_cast<int>(sum.size());
      out.push_back(row("fairness", params, "sum_power", mean_stat(sum), kept, 0.0));
      out.push_back(row("fairness", params, "min_user_power", mean_stat(min_power), kept, 0.0));
      RatioStat ratio = ratio_of_means(sum, sca_paired);
      out.push_back(row("fairness", params, "sum_ratio_to_sca", ratio.ratio, ratio.stderr_, kept, 0.0));
      out.push_back(row("fairness", params, "excluded_qos_violated", excluded, 0.0, cfg.trials, 0.0));
      out.push_back(row("fairness", params, "spmc_above_sca", above, 0.0, cfg.trials, 0.0));
      out.push_back(row("fairness", params, "max_violation_kept", worst_kept, 0.0, std::max(kept, 1), 0.0));
    }
  }
  return out;
}

// -------------------------------------------------------------------- csv

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentResult>& rows) {
  out << "experiment,param_json,statistic,value,stderr,trials,ms\n";
  for (const auto& r : rows) {
    out << quote_csv(r.experiment) << ',' << quote_csv(r.params.dump()) << ',' << quote_csv(r.statistic) << ','
        << format_double(r.value) << ',' << format_double(r.stderr_) << ',' << r.trials << ','
        << format_double(r.ms) << '\n';
  }
}

std::vector<ExperimentResult> read_csv(std::istream& in) {
  std::vector<ExperimentResult> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 7) throw ConfigError("read_csv: expected 7 fields, got " + std::to_string(f.size()));
    ExperimentResult r;
    r.experiment = f[0];
    r.params = ordered_json::parse(f[1]);
    r.statistic = f[2];
    r.value = std::stod(f[3]);
    r.stderr_ = std::stod(f[4]);
    r.trials = std::stoi(f[5]);
    r.ms = std::stod(f[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// -------------------------------------------------------------------- svg

bool write_svg(std::ostream& out, const std::vector<ExperimentResult>& rows, const std::string& statistic,
               const std::string& x_key) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& r : rows) {
    if (r.statistic != statistic || !r.params.contains(x_key) || !r.params.at(x_key).is_number()) continue;
    ordered_json rest = r.params;
    rest.erase(x_key);
    series[rest.dump()].emplace_back(r.params.at(x_key).get<double>(), r.value);
  }
  if (series.empty()) return false;

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double w = 640, h = 400, left = 70, right = 20, top = 30, bottom = 50;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << x_key << "</text>\n";
  out << "<text x=\"" << left << "\" y=\"" << top - 10 << "\">" << statistic << " [" << format_double(y0) << ", "
      << format_double(y1) << "]</text>\n";
  std::size_t i = 0;
  for (const auto& [name, pts] : series) {
    const char* color = colors[i % (sizeof colors / sizeof *colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (auto [x, y] : pts) out << px(x) << ',' << py(y) << ' ';
    out << "\"><title>";
    for (char c : name) {
      if (c == '<') out << "&lt;";
      else if (c == '&') out << "&amp;";
      else out << c;
    }
    out << "</title></polyline>\n";
    ++i;
  }
  out << "</svg>\n";
  return true;
}

}  // namespace cewpt
