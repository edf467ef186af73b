// Python bindings for the core solvers, channel generators and experiments.

#include "cewpt/experiments.hpp"
#include "cewpt/io.hpp"
#include "cewpt/quantize.hpp"
#include "cewpt/sdr.hpp"
#include "cewpt/spm_sca.hpp"
#include "cewpt/spmc_admm.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cewpt;

namespace {

py::object rows_to_list(const std::vector<ExperimentResult>& rows) {
  py::object loads = py::module_::import("json").attr("loads");
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["experiment"] = r.experiment;
    d["params"] = loads(r.params.dump());
    d["statistic"] = r.statistic;
    d["value"] = r.value;
    d["stderr"] = r.stderr_;
    d["trials"] = r.trials;
    d["ms"] = r.ms;
    out.append(d);
  }
  return out;
}

SolverConfig solver_config(double epsilon, int max_outer_iters, int restarts, std::uint64_t seed) {
  SolverConfig s;
  s.epsilon = epsilon;
  s.max_outer_iters = max_outer_iters;
  s.restarts = restarts;
  s.seed = seed;
  return s;
}

}  // namespace

PYBIND11_MODULE(_cewpt, m) {
  m.doc() = "Constant-envelope RIS-aided wireless power transfer: beamforming solvers";
  m.attr("__version__") = version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<NonHermitian>(m, "NonHermitian", PyExc_ValueError);

  py::class_<ChannelRealization>(m, "Channel")
      .def(py::init([](ComplexMatrix hd, ComplexMatrix hr, ComplexMatrix s, RealVector beta, double power,
                       double efficiency) {
             return make_realization(std::move(hd), std::move(hr), std::move(s), std::move(beta), power,
                                     efficiency);
           }),
           py::arg("hd"), py::arg("hr"), py::arg("s"), py::arg("beta"), py::arg("power"),
           py::arg("efficiency") = 1.0, "Assemble from blocks; G = diag(beta) S.")
      .def_readonly("hd", &ChannelRealization::hd)
      .def_readonly("hr", &ChannelRealization::hr)
      .def_readonly("s", &ChannelRealization::s)
      .def_readonly("g", &ChannelRealization::g)
      .def_readonly("beta", &ChannelRealization::beta)
      .def_readonly("power", &ChannelRealization::power)
      .def_readonly("efficiency", &ChannelRealization::efficiency)
      .def_property_readonly("antennas", &ChannelRealization::antennas)
      .def_property_readonly("users", &ChannelRealization::users)
      .def_property_readonly("elements", &ChannelRealization::elements)
      .def("composite", &composite_channel, py::arg("theta"), "H = H_r diag(exp(j theta)) G + H_d.")
      .def("to_csv", [](const ChannelRealization& r) {
        std::ostringstream out;
        write_channel_csv(out, r);
        return out.str();
      })
      .def_static("from_csv", [](const std::string& text) {
        std::istringstream in(text);
        return read_channel_csv(in);
      });

  py::class_<BeamformerSolution>(m, "Solution")
      .def_readonly("alpha", &BeamformerSolution::alpha)
      .def_readonly("theta", &BeamformerSolution::theta)
      .def_readonly("x", &BeamformerSolution::x)
      .def_readonly("v", &BeamformerSolution::v)
      .def_readonly("objective", &BeamformerSolution::objective)
      .def_readonly("user_powers", &BeamformerSolution::user_powers)
      .def_readonly("trace", &BeamformerSolution::trace)
      .def_readonly("iterations", &BeamformerSolution::iterations)
      .def_readonly("max_violation", &BeamformerSolution::max_violation)
      .def_property_readonly("status", [](const BeamformerSolution& s) { return to_string(s.status); })
      .def("to_json", [](const BeamformerSolution& s) { return solution_to_json(s).dump(); })
      .def("__repr__", [](const BeamformerSolution& s) {
        return "<Solution objective=" + std::to_string(s.objective) + " status=" + to_string(s.status) + ">";
      });

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("antennas", &ScenarioConfig::antennas)
      .def_readwrite("users", &ScenarioConfig::users)
      .def_readwrite("carrier_hz", &ScenarioConfig::carrier_hz)
      .def_readwrite("power_w", &ScenarioConfig::power_w)
      .def_readwrite("efficiency", &ScenarioConfig::efficiency)
      .def_readwrite("pathloss_exponent", &ScenarioConfig::pathloss_exponent)
      .def_readwrite("rician_g", &ScenarioConfig::rician_g)
      .def_readwrite("rician_hr", &ScenarioConfig::rician_hr)
      .def_readwrite("d1", &ScenarioConfig::d1)
      .def_readwrite("d2", &ScenarioConfig::d2)
      .def_readwrite("d3", &ScenarioConfig::d3)
      .def_readwrite("d4", &ScenarioConfig::d4)
      .def_readwrite("delta0", &ScenarioConfig::delta0)
      .def_readwrite("delta1", &ScenarioConfig::delta1)
      .def_readwrite("delta2", &ScenarioConfig::delta2)
      .def_readwrite("ris2_angle", &ScenarioConfig::ris2_angle)
      .def_readwrite("spacing", &ScenarioConfig::spacing)
      .def_readwrite("user_radius", &ScenarioConfig::user_radius)
      .def_readwrite("direct_link", &ScenarioConfig::direct_link);

  m.def(
      "make_scenario",
      [](const ScenarioConfig& cfg, const std::vector<int>& elements, double amplitude, std::uint64_t seed) {
        cfg.validate();
        Rng rng(seed);
        return make_scenario(cfg, default_surfaces(cfg, elements, amplitude), rng);
      },
      py::arg("config") = ScenarioConfig{}, py::arg("elements") = std::vector<int>{5, 5}, py::arg("amplitude") = 1.0,
      py::arg("seed") = 1, "Draw a channel for the two-surface deployment.");

  m.def(
      "make_ideal",
      [](Index antennas, Index users, Index elements, const std::string& model, double rho_g, double rho_h,
         bool normalize_hr, double power, std::uint64_t seed) {
        IdealChannelSpec spec;
        spec.antennas = antennas;
        spec.users = users;
        spec.elements = elements;
        spec.model = channel_model_from_string(model);
        spec.rho_g = rho_g;
        spec.rho_h = rho_h;
        spec.normalize_hr = normalize_hr;
        spec.power = power;
        Rng rng(seed);
        return make_ideal(spec, rng);
      },
      py::arg("antennas") = 4, py::arg("users") = 4, py::arg("elements") = 64, py::arg("model") = "los_g",
      py::arg("rho_g") = 1.0, py::arg("rho_h") = 1.0, py::arg("normalize_hr") = false, py::arg("power") = 1.0,
      py::arg("seed") = 1, "Draw from an idealised family: los_g, rayleigh, los_hr or rician.");

  m.def("sum_power", &sum_power, py::arg("channel"), py::arg("alpha"), py::arg("theta"),
        "||H x||^2 at the given transmit and RIS phases.");

  m.def(
      "solve_spm_sca",
      [](const ChannelRealization& real, double epsilon, int max_outer_iters, int restarts, std::uint64_t seed) {
        return solve_spm_sca(real, solver_config(epsilon, max_outer_iters, restarts, seed));
      },
      py::arg("channel"), py::arg("epsilon") = 1e-5, py::arg("max_outer_iters") = 500, py::arg("restarts") = 1,
      py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve_spm_sdr",
      [](const ChannelRealization& real, int randomizations, double sdp_tolerance, int sdp_max_iters,
         double epsilon, int max_outer_iters, int restarts, std::uint64_t seed) {
        SdrConfig cfg;
        cfg.randomizations = randomizations;
        cfg.sdp_tolerance = sdp_tolerance;
        cfg.sdp_max_iters = sdp_max_iters;
        cfg.seed = seed;
        return solve_spm_sdr(real, cfg, solver_config(epsilon, max_outer_iters, restarts, seed));
      },
      py::arg("channel"), py::arg("randomizations") = 100, py::arg("sdp_tolerance") = 1e-6,
      py::arg("sdp_max_iters") = 5000, py::arg("epsilon") = 1e-5, py::arg("max_outer_iters") = 500,
      py::arg("restarts") = 1, py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<AdmmConfig>(m, "AdmmConfig")
      .def(py::init<>())
      .def_readwrite("rho", &AdmmConfig::rho)
      .def_readwrite("rho_bar", &AdmmConfig::rho_bar)
      .def_readwrite("inner_max_iters", &AdmmConfig::inner_max_iters)
      .def_readwrite("inner_tolerance", &AdmmConfig::inner_tolerance)
      .def_readwrite("epsilon", &AdmmConfig::epsilon)
      .def_readwrite("max_outer_iters", &AdmmConfig::max_outer_iters)
      .def_readwrite("qos_tolerance", &AdmmConfig::qos_tolerance);

  m.def(
      "solve_spmc",
      [](const ChannelRealization& real, const RealVector& p, const AdmmConfig& cfg) {
        return solve_spmc(real, QosSpec{p, real.efficiency}, cfg);
      },
      py::arg("channel"), py::arg("p"), py::arg("config") = AdmmConfig{}, py::call_guard<py::gil_scoped_release>(),
      "Sum-power maximisation with per-user minimum harvested powers p.");

  m.def(
      "estimate_qmm",
      [](const ChannelRealization& real, const AdmmConfig& cfg, int restarts, std::uint64_t seed) {
        return estimate_qmm(real, cfg, solver_config(1e-5, 500, restarts, seed)).value;
      },
      py::arg("channel"), py::arg("config") = AdmmConfig{}, py::arg("restarts") = 1, py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>(), "Largest common threshold tau the constrained solver can meet.");

  m.def(
      "solve_diag_sdp",
      [](const ComplexMatrix& cost, double diagonal, double tolerance, int max_iters) {
        SdpResult r = solve_diag_sdp({cost, diagonal, tolerance, max_iters});
        py::dict d;
        d["x"] = r.x;
        d["objective"] = r.objective;
        d["dual_bound"] = r.dual_bound;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("cost"), py::arg("diagonal") = 1.0, py::arg("tolerance") = 1e-6, py::arg("max_iters") = 5000,
      "max tr(C X) s.t. diag(X) = diagonal, X PSD.");

  m.def("qos_halfspace_project", &qos_halfspace_project, py::arg("h"), py::arg("tau"), py::arg("z"),
        "Nearest point to z with |h^H e|^2 >= tau.");

  m.def(
      "project_codebook",
      [](const RealVector& theta, int bits) {
        PhaseCodebook cb{bits};
        cb.validate();
        return project_codebook(theta, cb);
      },
      py::arg("theta"), py::arg("bits"));
  m.def("prop2_bound", &prop2_bound, py::arg("bits"), "Quantisation loss bound 2^{2b}/pi^2 sin^2(pi/2^b).");

  m.def(
      "scaling_law_sweep",
      [](std::vector<Index> elements, Index antennas, Index users, const std::string& model, int trials,
         std::uint64_t seed, int threads) {
        ScalingConfig cfg;
        cfg.elements = std::move(elements);
        cfg.antennas = antennas;
        cfg.users = users;
        cfg.model = channel_model_from_string(model);
        cfg.trials = trials;
        std::vector<ExperimentResult> rows;
        {
          py::gil_scoped_release release;
          rows = scaling_law_sweep(cfg, RunOptions{seed, threads, false});
        }
        return rows_to_list(rows);
      },
      py::arg("elements") = std::vector<Index>{25, 50, 100, 200}, py::arg("antennas") = 4, py::arg("users") = 4,
      py::arg("model") = "los_g", py::arg("trials") = 100, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "wishart_lambda_check",
      [](Index users, Index elements, double rho_h, int trials, std::uint64_t seed, int threads) {
        WishartConfig cfg{users, elements, rho_h, trials};
        return rows_to_list({wishart_lambda_check(cfg, RunOptions{seed, threads, false})});
      },
      py::arg("users") = 4, py::arg("elements") = 500, py::arg("rho_h") = 1.0, py::arg("trials") = 200,
      py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "quantization_sweep",
      [](std::vector<int> bits, std::vector<Index> elements, const std::vector<std::string>& models, int trials,
         std::uint64_t seed, int threads) {
        QuantizationConfig cfg;
        cfg.bits = std::move(bits);
        cfg.elements = std::move(elements);
        cfg.models.clear();
        for (const auto& tag : models) cfg.models.push_back(channel_model_from_string(tag));
        cfg.trials = trials;
        std::vector<ExperimentResult> rows;
        {
          py::gil_scoped_release release;
          rows = quantization_sweep(cfg, RunOptions{seed, threads, false});
        }
        return rows_to_list(rows);
      },
      py::arg("bits") = std::vector<int>{1, 2}, py::arg("elements") = std::vector<Index>{50, 100, 200},
      py::arg("models") = std::vector<std::string>{"los_g"}, py::arg("trials") = 200, py::arg("seed") = 1,
      py::arg("threads") = 0);

  m.def(
      "algorithm_comparison",
      [](std::vector<Index> antennas, std::vector<Index> elements, Index users, int trials, int randomizations,
         std::uint64_t seed, int threads) {
        ComparisonConfig cfg;
        cfg.antennas = std::move(antennas);
        cfg.elements = std::move(elements);
        cfg.users = users;
        cfg.trials = trials;
        cfg.sdr.randomizations = randomizations;
        std::vector<ExperimentResult> rows;
        {
          py::gil_scoped_release release;
          rows = algorithm_comparison(cfg, RunOptions{seed, threads, false});
        }
        return rows_to_list(rows);
      },
      py::arg("antennas") = std::vector<Index>{4, 8}, py::arg("elements") = std::vector<Index>{8, 16},
      py::arg("users") = 4, py::arg("trials") = 20, py::arg("randomizations") = 100, py::arg("seed") = 1,
      py::arg("threads") = 0);

  m.def(
      "fairness_sweep",
      [](std::vector<double> gammas, std::vector<Index> elements, Index antennas, Index users, int trials,
         int sca_restarts, std::uint64_t seed, int threads) {
        FairnessConfig cfg;
        cfg.gammas = std::move(gammas);
        cfg.elements = std::move(elements);
        cfg.antennas = antennas;
        cfg.users = users;
        cfg.trials = trials;
        cfg.sca_restarts = sca_restarts;
        std::vector<ExperimentResult> rows;
        {
          py::gil_scoped_release release;
          rows = fairness_sweep(cfg, RunOptions{seed, threads, false});
        }
        return rows_to_list(rows);
      },
      py::arg("gammas") = std::vector<double>{0.0, 0.2, 0.5, 0.8}, py::arg("elements") = std::vector<Index>{16},
      py::arg("antennas") = 4, py::arg("users") = 4, py::arg("trials") = 50, py::arg("sca_restarts") = 5,
      py::arg("seed") = 1, py::arg("threads") = 0);
}
