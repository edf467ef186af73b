// Command-line front end: single solves and named Monte Carlo experiments.

#include "cewpt/experiments.hpp"
#include "cewpt/io.hpp"
#include "cewpt/parallel.hpp"
#include "cewpt/spm_sca.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace cewpt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitQos = 2;

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::string channel_path;
  std::string algorithm;
  std::string experiment;
  std::uint64_t seed = 0;
  int threads = 0;
  bool svg = false;
  bool timing = false;
  bool seed_set = false, threads_set = false;
};

struct Settings {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = "out";
  bool svg = false;
  bool timing = false;
};

// Command-line flags win over their run.* equivalents.
Settings resolve_settings(const KeyValueConfig& cfg, const Flags& flags) {
  Settings s;
  s.seed = flags.seed_set ? flags.seed : cfg.get_u64("run.seed", 1);
  s.threads = flags.threads_set ? flags.threads : static_cast<int>(cfg.get_int("run.threads", 0));
  s.out_dir = !flags.out_dir.empty() ? flags.out_dir : cfg.get_string("run.out", "out");
  s.svg = flags.svg || cfg.get_bool("run.svg", false);
  s.timing = flags.timing || cfg.get_bool("run.timing", false);
  if (s.threads < 0) throw ConfigError("threads must be >= 0");
  return s;
}

ScenarioConfig scenario_from(const KeyValueConfig& c) {
  ScenarioConfig s;
  s.antennas = static_cast<int>(c.get_int("scenario.antennas", s.antennas));
  s.users = static_cast<int>(c.get_int("scenario.users", s.users));
  s.carrier_hz = c.get_double("scenario.carrier_hz", s.carrier_hz);
  s.power_w = c.get_double("scenario.power_w", s.power_w);
  s.efficiency = c.get_double("scenario.efficiency", s.efficiency);
  s.pathloss_exponent = c.get_double("scenario.pathloss_exponent", s.pathloss_exponent);
  s.rician_g = c.get_double("scenario.rician_g", s.rician_g);
  s.rician_hr = c.get_double("scenario.rician_hr", s.rician_hr);
  s.d1 = c.get_double("scenario.d1", s.d1);
  s.d2 = c.get_double("scenario.d2", s.d2);
  s.d3 = c.get_double("scenario.d3", s.d3);
  s.d4 = c.get_double("scenario.d4", s.d4);
  s.delta0 = c.get_double("scenario.delta0", s.delta0);
  s.delta1 = c.get_double("scenario.delta1", s.delta1);
  s.delta2 = c.get_double("scenario.delta2", s.delta2);
  s.ris2_angle = c.get_double("scenario.ris2_angle", s.ris2_angle);
  s.spacing = c.get_double("scenario.spacing", s.spacing);
  s.user_radius = c.get_double("scenario.user_radius", s.user_radius);
  s.direct_link = c.get_bool("scenario.direct_link", s.direct_link);
  s.validate();
  return s;
}

ChannelRealization channel_from(const KeyValueConfig& c, const Flags& flags, std::uint64_t seed) {
  std::string file = !flags.channel_path.empty() ? flags.channel_path : c.get_string("scenario.channel_file", "");
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open channel file " + file);
    return read_channel_csv(in);
  }
  Rng rng(seed);
  const std::string source = c.get_string("scenario.source", "scenario");
  if (source == "ideal") {
    IdealChannelSpec spec;
    spec.antennas = c.get_int("scenario.antennas", spec.antennas);
    spec.users = c.get_int("scenario.users", spec.users);
    spec.elements = c.get_int("scenario.elements", spec.elements);
    spec.model = channel_model_from_string(c.get_string("scenario.model", to_string(spec.model)));
    spec.rho_g = c.get_double("scenario.rho_g", spec.rho_g);
    spec.rho_h = c.get_double("scenario.rho_h", spec.rho_h);
    spec.normalize_hr = c.get_bool("scenario.normalize_hr", spec.normalize_hr);
    spec.power = c.get_double("scenario.power_w", spec.power);
    return make_ideal(spec, rng);
  }
  if (source != "scenario") throw ConfigError("scenario.source must be scenario or ideal, got " + source);
  ScenarioConfig sc = scenario_from(c);
  std::vector<int> counts;
  for (long long n : c.get_ints("scenario.elements", {5, 5})) {
    if (n < 0) throw ConfigError("scenario.elements entries must be >= 0");
    counts.push_back(static_cast<int>(n));
  }
  auto surfaces = default_surfaces(sc, counts, c.get_double("scenario.amplitude", 1.0));
  return make_scenario(sc, surfaces, rng);
}

SolverConfig solver_from(const KeyValueConfig& c, std::uint64_t seed) {
  SolverConfig s;
  s.epsilon = c.get_double("solver.epsilon", s.epsilon);
  s.max_outer_iters = static_cast<int>(c.get_int("solver.max_outer_iters", s.max_outer_iters));
  s.restarts = static_cast<int>(c.get_int("solver.restarts", s.restarts));
  s.seed = seed;
  s.validate();
  return s;
}

SdrConfig sdr_from(const KeyValueConfig& c, std::uint64_t seed) {
  SdrConfig s;
  s.randomizations = static_cast<int>(c.get_int("solver.randomizations", s.randomizations));
  s.sdp_tolerance = c.get_double("solver.sdp_tolerance", s.sdp_tolerance);
  s.sdp_max_iters = static_cast<int>(c.get_int("solver.sdp_max_iters", s.sdp_max_iters));
  s.seed = seed;
  s.validate();
  return s;
}

AdmmConfig admm_from(const KeyValueConfig& c) {
  AdmmConfig a;
  a.rho = c.get_double("solver.rho", a.rho);
  a.rho_bar = c.get_double("solver.rho_bar", a.rho_bar);
  a.inner_max_iters = static_cast<int>(c.get_int("solver.inner_max_iters", a.inner_max_iters));
  a.inner_tolerance = c.get_double("solver.inner_tolerance", a.inner_tolerance);
  a.epsilon = c.get_double("solver.epsilon", a.epsilon);
  a.max_outer_iters = static_cast<int>(c.get_int("solver.max_outer_iters", a.max_outer_iters));
  a.qos_tolerance = c.get_double("solver.qos_tolerance", a.qos_tolerance);
  a.validate();
  return a;
}

std::vector<Index> to_index(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_file(const fs::path& path, const std::string& bytes, RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << bytes;
  manifest.artifacts.emplace_back(path.filename().string(), fnv1a64(bytes));
}

void warn_unused(const KeyValueConfig& cfg) {
  for (const auto& k : cfg.unused_keys()) std::cerr << "warning: config key '" << k << "' was not used\n";
}

int cmd_solve(const KeyValueConfig& cfg, const Flags& flags, RunManifest& manifest) {
  Settings run = resolve_settings(cfg, flags);
  std::string algorithm = !flags.algorithm.empty() ? flags.algorithm : cfg.get_string("solve.algorithm", "spm-sca");
  if (algorithm != "spm-sca" && algorithm != "spm-sdr" && algorithm != "spmc")
    throw ConfigError("unknown algorithm '" + algorithm + "' (spm-sca, spm-sdr, spmc)");

  ChannelRealization real = channel_from(cfg, flags, mix_seed(run.seed, 0));
  const std::uint64_t solver_seed = mix_seed(run.seed, 1);
  BeamformerSolution sol;
  if (algorithm == "spm-sca") {
    sol = solve_spm_sca(real, solver_from(cfg, solver_seed));
  } else if (algorithm == "spm-sdr") {
    sol = solve_spm_sdr(real, sdr_from(cfg, solver_seed), solver_from(cfg, solver_seed));
  } else {
    AdmmConfig admm = admm_from(cfg);
    QosSpec qos;
    qos.efficiency = real.efficiency;
    const Index k = real.users();
    if (cfg.has("qos.p")) {
      std::vector<double> p = cfg.get_doubles("qos.p", {});
      if (p.size() == 1) p.assign(static_cast<std::size_t>(k), p[0]);
      if (static_cast<Index>(p.size()) != k) throw ConfigError("qos.p needs one value or one per user");
      qos.p = Eigen::Map<RealVector>(p.data(), k);
    } else if (cfg.has("qos.gamma")) {
      double gamma = cfg.get_double("qos.gamma", 0.0);
      double qmm = estimate_qmm(real, admm, solver_from(cfg, solver_seed)).value;
      qos.p = RealVector::Constant(k, real.efficiency * gamma * qmm);
    } else {
      throw ConfigError("spmc needs qos.p or qos.gamma");
    }
    sol = solve_spmc(real, qos, admm);
  }
  warn_unused(cfg);

  fs::create_directories(run.out_dir);
  manifest.seed = run.seed;
  manifest.threads = run.threads;
  manifest.output_dir = run.out_dir;
  write_file(fs::path(run.out_dir) / "solution.json", solution_to_json(sol).dump(2) + "\n", manifest);
  std::ostringstream channel;
  write_channel_csv(channel, real);
  write_file(fs::path(run.out_dir) / "channel.csv", channel.str(), manifest);

  std::cout.precision(17);
  std::cout << "objective " << sol.objective << " status " << to_string(sol.status) << "\n";
  return sol.status == SolveStatus::kQosViolated ? kExitQos : kExitOk;
}

std::vector<ExperimentResult> run_experiment(const std::string& name, const KeyValueConfig& c,
                                             const RunOptions& opts, std::string& svg_stat, std::string& svg_x) {
  if (name == "scaling") {
    ScalingConfig s;
    s.antennas = c.get_int("experiment.antennas", s.antennas);
    s.users = c.get_int("experiment.users", s.users);
    s.rho_g = c.get_double("experiment.rho_g", s.rho_g);
    s.rho_h = c.get_double("experiment.rho_h", s.rho_h);
    s.power = c.get_double("experiment.power", s.power);
    s.elements = to_index(c.get_ints("experiment.elements", {s.elements.begin(), s.elements.end()}));
    s.model = channel_model_from_string(c.get_string("experiment.model", to_string(s.model)));
    s.trials = static_cast<int>(c.get_int("experiment.trials", s.trials));
    s.restarts = static_cast<int>(c.get_int("experiment.restarts", s.restarts));
    s.band_tolerance = c.get_double("experiment.band_tolerance", s.band_tolerance);
    svg_stat = "q_over_n2";
    svg_x = "N";
    auto rows = scaling_law_sweep(s, opts);
    if (!scaling_band_holds(rows, s.band_tolerance))
      std::cerr << "warning: largest-N mean lies outside the widened [pi/4, 1] band\n";
    return rows;
  }
  if (name == "wishart") {
    WishartConfig w;
    w.users = c.get_int("experiment.users", w.users);
    w.elements = c.get_int("experiment.elements", w.elements);
    w.rho_h = c.get_double("experiment.rho_h", w.rho_h);
    w.trials = static_cast<int>(c.get_int("experiment.trials", w.trials));
    return {wishart_lambda_check(w, opts)};
  }
  if (name == "quantization") {
    QuantizationConfig q;
    std::vector<long long> bits = c.get_ints("experiment.bits", {1, 2});
    q.bits.assign(bits.begin(), bits.end());
    q.elements = to_index(c.get_ints("experiment.elements", {q.elements.begin(), q.elements.end()}));
    q.models.clear();
    for (const auto& m : c.get_strings("experiment.models", {"los_g"})) q.models.push_back(channel_model_from_string(m));
    q.antennas = c.get_int("experiment.antennas", q.antennas);
    q.users = c.get_int("experiment.users", q.users);
    q.normalize_hr = c.get_bool("experiment.normalize_hr", q.normalize_hr);
    q.trials = static_cast<int>(c.get_int("experiment.trials", q.trials));
    q.restarts = static_cast<int>(c.get_int("experiment.restarts", q.restarts));
    svg_stat = "delta";
    svg_x = "N";
    return quantization_sweep(q, opts);
  }
  if (name == "comparison") {
    ComparisonConfig a;
    a.antennas = to_index(c.get_ints("experiment.antennas", {a.antennas.begin(), a.antennas.end()}));
    a.elements = to_index(c.get_ints("experiment.elements", {a.elements.begin(), a.elements.end()}));
    a.users = c.get_int("experiment.users", a.users);
    a.trials = static_cast<int>(c.get_int("experiment.trials", a.trials));
    a.sca_restarts = static_cast<int>(c.get_int("experiment.sca_restarts", a.sca_restarts));
    a.scenario = scenario_from(c);
    a.sdr = sdr_from(c, 1);
    svg_stat = "sca_sum_power";
    svg_x = "N";
    return algorithm_comparison(a, opts);
  }
  if (name == "fairness") {
    FairnessConfig f;
    f.gammas = c.get_doubles("experiment.gammas", f.gammas);
    f.elements = to_index(c.get_ints("experiment.elements", {f.elements.begin(), f.elements.end()}));
    f.antennas = c.get_int("experiment.antennas", f.antennas);
    f.users = c.get_int("experiment.users", f.users);
    f.trials = static_cast<int>(c.get_int("experiment.trials", f.trials));
    f.sca_restarts = static_cast<int>(c.get_int("experiment.sca_restarts", f.sca_restarts));
    f.scenario = scenario_from(c);
    f.admm = admm_from(c);
    svg_stat = "sum_power";
    svg_x = "gamma";
    return fairness_sweep(f, opts);
  }
  throw ConfigError("unknown experiment '" + name + "' (scaling, quantization, comparison, fairness, wishart)");
}

int cmd_experiment(const KeyValueConfig& cfg, const Flags& flags, RunManifest& manifest) {
  Settings run = resolve_settings(cfg, flags);
  RunOptions opts{run.seed, run.threads, run.timing};
  std::string svg_stat, svg_x;
  std::vector<ExperimentResult> rows = run_experiment(flags.experiment, cfg, opts, svg_stat, svg_x);
  warn_unused(cfg);

  fs::create_directories(run.out_dir);
  manifest.seed = run.seed;
  manifest.threads = resolve_threads(run.threads);
  manifest.output_dir = run.out_dir;
  std::ostringstream csv;
  write_csv(csv, rows);
  write_file(fs::path(run.out_dir) / (flags.experiment + ".csv"), csv.str(), manifest);
  if (run.svg && !svg_stat.empty()) {
    std::ostringstream svg;
    if (write_svg(svg, rows, svg_stat, svg_x))
      write_file(fs::path(run.out_dir) / (flags.experiment + ".svg"), svg.str(), manifest);
  }
  std::cout << "wrote " << rows.size() << " rows to " << (fs::path(run.out_dir) / (flags.experiment + ".csv")).string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-envelope RIS beamforming: solvers and Monte Carlo experiments"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "flat key = value configuration file");
    sub->add_option("--seed", flags.seed, "master seed (run.seed)")->each([&](const std::string&) {
      flags.seed_set = true;
    });
    sub->add_option("--out", flags.out_dir, "output directory (run.out)");
    sub->add_option("--threads", flags.threads, "worker threads, 0 = all cores (run.threads)")
        ->each([&](const std::string&) { flags.threads_set = true; });
    sub->add_flag("--svg", flags.svg, "also write an SVG plot (run.svg)");
    sub->add_flag("--timing", flags.timing, "fill wall-clock columns (run.timing)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one channel draw");
  add_common(solve);
  solve->add_option("--algorithm", flags.algorithm, "spm-sca | spm-sdr | spmc (solve.algorithm)");
  solve->add_option("--channel", flags.channel_path, "replay a channel CSV dump (scenario.channel_file)");

  CLI::App* experiment = app.add_subcommand("experiment", "run a named Monte Carlo experiment");
  add_common(experiment);
  experiment->add_option("name", flags.experiment, "scaling | quantization | comparison | fairness | wishart")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config_path = flags.config_path;
  manifest.version = version();
  manifest.started_utc = utc_now();
  try {
    KeyValueConfig cfg = flags.config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(flags.config_path);
    int code;
    if (solve->parsed()) {
      manifest.command = "solve";
      code = cmd_solve(cfg, flags, manifest);
    } else {
      manifest.command = "experiment " + flags.experiment;
      code = cmd_experiment(cfg, flags, manifest);
    }
    manifest.wall_clock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    std::ofstream(fs::path(manifest.output_dir) / "manifest.json") << manifest.to_json().dump(2) << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
