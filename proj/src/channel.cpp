#include "cewpt/channel.hpp"

#include <cmath>
#include <numeric>

namespace cewpt {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double norm2d(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

double angle_to(const std::array<double, 2>& from, const std::array<double, 2>& to) {
  return std::atan2(to[1] - from[1], to[0] - from[0]);
}

int cluster_distance_index(std::size_t surface) { return surface == 0 ? 0 : 1; }

}  // namespace

void RisConfig::validate() const {
  if (elements <= 0) throw ConfigError("RisConfig: element count must be positive");
  if (amplitudes.size() != 0 && amplitudes.size() != elements)
    throw ConfigError("RisConfig: amplitude vector length must equal element count");
  for (Index i = 0; i < amplitudes.size(); ++i)
    if (!(amplitudes[i] >= 0.0 && amplitudes[i] <= 1.0))
      throw ConfigError("RisConfig: amplitudes must lie in [0, 1]");
}

RealVector RisConfig::resolved_amplitudes() const {
  if (amplitudes.size() == 0) return RealVector::Ones(elements);
  return amplitudes;
}

double ScenarioConfig::wavelength() const { return kSpeedOfLight / carrier_hz; }

void ScenarioConfig::validate() const {
  if (antennas < 1) throw ConfigError("scenario: M must be >= 1");
  if (users < 1) throw ConfigError("scenario: K must be >= 1");
  if (!(power_w > 0.0)) throw ConfigError("scenario: transmit power must be positive");
  if (!(carrier_hz > 0.0)) throw ConfigError("scenario: carrier frequency must be positive");
  if (!(pathloss_exponent > 0.0)) throw ConfigError("scenario: path-loss exponent must be positive");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("scenario: efficiency must lie in (0, 1]");
  if (rician_g < 0.0 || rician_hr < 0.0) throw ConfigError("scenario: Rician factors must be >= 0");
  for (double d : {d1, d2, d3, d4})
    if (!(d > 0.0)) throw ConfigError("scenario: distances must be positive");
  if (user_radius < 0.0) throw ConfigError("scenario: user radius must be >= 0");
  if (!(spacing > 0.0)) throw ConfigError("scenario: element spacing must be positive");
}

void ChannelRealization::validate() const {
  const Index k = hd.rows(), m = hd.cols(), n = hr.cols();
  require_dims(hr.rows() == k, "realization: H_r must have K rows");
  require_dims(s.rows() == n && s.cols() == m, "realization: S must be N x M");
  require_dims(g.rows() == n && g.cols() == m, "realization: G must be N x M");
  require_dims(beta.size() == n, "realization: beta must have N entries");
}

ChannelRealization make_realization(ComplexMatrix hd, ComplexMatrix hr, ComplexMatrix s, RealVector beta,
                                    double power, double efficiency) {
  ChannelRealization out;
  out.hd = std::move(hd);
  out.hr = std::move(hr);
  out.s = std::move(s);
  out.beta = std::move(beta);
  require_dims(out.beta.size() == out.s.rows(), "make_realization: beta length must equal rows of S");
  out.g = out.beta.asDiagonal() * out.s;
  out.power = power;
  out.efficiency = efficiency;
  out.validate();
  return out;
}

ComplexVector steering_vector(Index count, double delta) {
  ComplexVector out(count);
  for (Index k = 0; k < count; ++k) out[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) * delta);
  return out;
}

ComplexMatrix los_rank_one(double rho, double distance, double wavelength, const ComplexVector& e_r,
                           const ComplexVector& e_t) {
  if (!(wavelength > 0.0)) throw ConfigError("los_rank_one: wavelength must be positive");
  Complex factor = rho * std::polar(1.0, -2.0 * kPi * distance / wavelength);
  return factor * e_r * e_t.adjoint();
}

ComplexMatrix rician(Index rows, Index cols, double kappa, const ComplexMatrix& los, double pathloss_gain,
                     Rng& rng) {
  if (kappa < 0.0) throw ConfigError("rician: kappa must be >= 0");
  const double amp = std::sqrt(pathloss_gain);
  if (kappa > 0.0) require_dims(los.rows() == rows && los.cols() == cols, "rician: LoS component shape mismatch");
  if (kappa >= kLosRicianFactor) return amp * los;
  ComplexMatrix w = sample_cscg(rows, cols, rng);
  if (kappa == 0.0) return amp * w;
  return amp * (std::sqrt(kappa / (1.0 + kappa)) * los + std::sqrt(1.0 / (1.0 + kappa)) * w);
}

double pathloss_gain(double distance, double exponent) {
  if (!(distance > 0.0)) throw ConfigError("pathloss_gain: distance must be positive");
  return std::pow(distance, -exponent);
}

std::vector<RisConfig> default_surfaces(const ScenarioConfig& cfg, const std::vector<int>& element_counts,
                                        double amplitude) {
  std::vector<RisConfig> out;
  for (std::size_t i = 0; i < element_counts.size(); ++i) {
    if (element_counts[i] == 0) continue;
    RisConfig r;
    r.elements = element_counts[i];
    r.amplitudes = RealVector::Constant(r.elements, amplitude);
    double dist = i == 0 ? cfg.d1 : cfg.d2;
    double ang = i == 0 ? cfg.delta0 : cfg.ris2_angle;
    r.position = {dist * std::cos(ang), dist * std::sin(ang)};
    r.orientation = i == 0 ? cfg.delta1 : cfg.delta2;
    out.push_back(r);
  }
  return out;
}

ScenarioLayout scenario_layout(const ScenarioConfig& cfg, const std::vector<RisConfig>& ris) {
  ScenarioLayout layout;
  for (const auto& r : ris) layout.ris.push_back(r.position);

  const int k = cfg.users;
  const int clusters = ris.empty() ? 1 : static_cast<int>(ris.size());
  std::vector<std::array<double, 2>> centres;
  for (int c = 0; c < clusters; ++c) {
    std::array<double, 2> anchor;
    double reach = cluster_distance_index(c) == 0 ? cfg.d3 : cfg.d4;
    if (ris.empty()) {
      anchor = {cfg.d1 * std::cos(cfg.delta0), cfg.d1 * std::sin(cfg.delta0)};
    } else {
      anchor = ris[c].position;
    }
    double dir = angle_to(layout.bs, anchor);
    if (anchor[0] == 0.0 && anchor[1] == 0.0) dir = 0.0;
    centres.push_back({anchor[0] + reach * std::cos(dir), anchor[1] + reach * std::sin(dir)});
  }

  // Users are split into contiguous, near-equal groups, one per surface.
  layout.user_cluster.resize(k);
  std::vector<int> count(clusters, 0);
  for (int u = 0; u < k; ++u) {
    int c = static_cast<int>((static_cast<long long>(u) * clusters) / k);
    layout.user_cluster[u] = c;
    ++count[c];
  }
  std::vector<int> seen(clusters, 0);
  for (int u = 0; u < k; ++u) {
    int c = layout.user_cluster[u];
    double phi = 2.0 * kPi * seen[c]++ / std::max(1, count[c]);
    layout.user_positions.push_back(
        {centres[c][0] + cfg.user_radius * std::cos(phi), centres[c][1] + cfg.user_radius * std::sin(phi)});
  }
  return layout;
}

ChannelRealization make_scenario(const ScenarioConfig& cfg, const std::vector<RisConfig>& ris, Rng& rng) {
  cfg.validate();
  for (const auto& r : ris) r.validate();

  const Index m = cfg.antennas, k = cfg.users;
  const double lambda = cfg.wavelength();
  const double n_exp = cfg.pathloss_exponent;
  ScenarioLayout layout = scenario_layout(cfg, ris);

  ComplexMatrix hd = ComplexMatrix::Zero(k, m);
  if (cfg.direct_link) {
    for (Index u = 0; u < k; ++u) {
      double d = norm2d(layout.bs, layout.user_positions[u]);
      hd.row(u) = std::sqrt(pathloss_gain(d, n_exp)) * sample_cscg(1, m, rng);
    }
  }

  Index n_total = 0;
  for (const auto& r : ris) n_total += r.elements;
  ComplexMatrix hr(k, n_total);
  ComplexMatrix s(n_total, m);
  RealVector beta(n_total);

  Index offset = 0;
  for (std::size_t l = 0; l < ris.size(); ++l) {
    const RisConfig& r = ris[l];
    const Index nl = r.elements;
    const double d_bs = norm2d(layout.bs, r.position);
    if (!(d_bs > 0.0)) throw ConfigError("make_scenario: surface cannot coincide with the base station");

    const double departure = angle_to(layout.bs, r.position);
    const double arrival = departure + kPi - r.orientation;
    ComplexVector e_t = steering_vector(m, cfg.spacing * std::cos(departure));
    ComplexVector e_r = steering_vector(nl, cfg.spacing * std::cos(arrival));
    ComplexMatrix los = los_rank_one(1.0, d_bs, lambda, e_r, e_t);
    s.middleRows(offset, nl) = rician(nl, m, cfg.rician_g, los, pathloss_gain(d_bs, n_exp), rng);

    for (Index u = 0; u < k; ++u) {
      const double d_u = norm2d(r.position, layout.user_positions[u]);
      const double gain = pathloss_gain(d_u, n_exp);
      if (layout.user_cluster[u] == static_cast<int>(l)) {
        double aod = angle_to(r.position, layout.user_positions[u]) - r.orientation;
        ComplexVector e = steering_vector(nl, cfg.spacing * std::cos(aod));
        ComplexMatrix row_los = std::polar(1.0, -2.0 * kPi * d_u / lambda) * e.transpose();
        hr.block(u, offset, 1, nl) = rician(1, nl, cfg.rician_hr, row_los, gain, rng);
      } else {
        hr.block(u, offset, 1, nl) = rician(1, nl, 0.0, ComplexMatrix(), gain, rng);
      }
    }
    beta.segment(offset, nl) = r.resolved_amplitudes();
    offset += nl;
  }

  return make_realization(std::move(hd), std::move(hr), std::move(s), std::move(beta), cfg.power_w, cfg.efficiency);
}

ComplexMatrix composite_channel(const ChannelRealization& real, const RealVector& theta) {
  require_dims(theta.size() == real.elements(), "composite_channel: theta must have N entries");
  if (real.elements() == 0) return real.hd;
  ComplexVector psi = unit_circle_exp(theta);
  return real.hr * psi.asDiagonal() * real.g + real.hd;
}

RealVector received_powers(const ComplexMatrix& h, const ComplexVector& x, double efficiency) {
  require_dims(h.cols() == x.size(), "received_powers: H columns must match x length");
  ComplexVector y = h * x;
  return efficiency * y.cwiseAbs2();
}

std::string to_string(ChannelModel model) {
  switch (model) {
    case ChannelModel::kLosG: return "los_g";
    case ChannelModel::kRayleigh: return "rayleigh";
    case ChannelModel::kLosHr: return "los_hr";
    case ChannelModel::kRician: return "rician";
  }
  return "unknown";
}

ChannelModel channel_model_from_string(const std::string& tag) {
  if (tag == "los_g") return ChannelModel::kLosG;
  if (tag == "rayleigh") return ChannelModel::kRayleigh;
  if (tag == "los_hr") return ChannelModel::kLosHr;
  if (tag == "rician") return ChannelModel::kRician;
  throw ConfigError("unknown channel model tag: " + tag);
}

ChannelRealization make_ideal(const IdealChannelSpec& spec, Rng& rng) {
  const Index m = spec.antennas, k = spec.users, n = spec.elements;
  if (m < 1 || k < 1 || n < 0) throw ConfigError("make_ideal: invalid dimensions");
  const double hr_scale = spec.rho_h * (spec.normalize_hr && n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0);

  ComplexMatrix g_los = los_rank_one(1.0, 0.0, 1.0, steering_vector(n, spec.delta_r), steering_vector(m, spec.delta_t));
  auto los_rows = [&](Rng& r) {
    ComplexMatrix out(k, n);
    for (Index u = 0; u < k; ++u) {
      double delta = 0.5 * std::cos(r.uniform(0.0, kPi));
      out.row(u) = std::polar(1.0, r.uniform_phase()) * steering_vector(n, delta).transpose();
    }
    return out;
  };

  ComplexMatrix g, hr;
  switch (spec.model) {
    case ChannelModel::kLosG:
      g = spec.rho_g * g_los;
      hr = hr_scale * sample_cscg(k, n, rng);
      break;
    case ChannelModel::kRayleigh:
      g = spec.rho_g * sample_cscg(n, m, rng);
      hr = hr_scale * sample_cscg(k, n, rng);
      break;
    case ChannelModel::kLosHr:
      g = spec.rho_g * sample_cscg(n, m, rng);
      hr = hr_scale * los_rows(rng);
      break;
    case ChannelModel::kRician: {
      g = spec.rho_g * rician(n, m, 2.0, g_los, 1.0, rng);
      ComplexMatrix los = los_rows(rng);
      hr = hr_scale * rician(k, n, 2.0, los, 1.0, rng);
      break;
    }
  }
  return make_realization(ComplexMatrix::Zero(k, m), std::move(hr), std::move(g), RealVector::Ones(n), spec.power);
}

}  // namespace cewpt
