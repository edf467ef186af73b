#pragma once

#include "cewpt/linalg.hpp"

#include <array>
#include <string>
#include <vector>

namespace cewpt {

struct RisConfig {
  int elements = 0;
  RealVector amplitudes;              // length `elements`, entries in [0, 1]; empty = all ones
  std::array<double, 2> position{};   // metres
  double orientation = 0.0;           // array axis angle, radians

  /// Throws ConfigError when the amplitudes or element count are invalid.
  void validate() const;
  RealVector resolved_amplitudes() const;
};

/// Geometry and propagation parameters for the two-surface deployment.
///
/// The base station sits at the origin with its array along the x axis.
/// RIS 1 is placed at distance d1 along angle delta0 with array axis delta1;
/// RIS 2 at distance d2 along angle ris2_angle with array axis delta2. User
/// cluster i is centred d3 (resp. d4) metres beyond RIS i on the ray from the
/// base station, users evenly spaced on a circle of radius user_radius.
struct ScenarioConfig {
  int antennas = 4;                  // M
  int users = 8;                     // K
  double carrier_hz = 755e6;
  double power_w = 10.0;             // P
  double efficiency = 1.0;           // eta
  double pathloss_exponent = 3.0;
  double rician_g = 2.0;             // BS -> RIS links
  double rician_hr = 2.0;            // RIS_i -> users of cluster i
  double d1 = 8.0, d2 = 7.0, d3 = 4.0, d4 = 5.0;
  double delta0 = kPi / 4, delta1 = kPi / 4, delta2 = kPi / 3;
  double ris2_angle = -kPi / 4;
  double spacing = 0.5;              // element spacing in wavelengths
  double user_radius = 2.0;
  bool direct_link = true;           // false zeroes H_d

  double wavelength() const;
  void validate() const;
};

/// One draw of the channels. G = diag(beta) * S.
struct ChannelRealization {
  ComplexMatrix hd;  // K x M
  ComplexMatrix hr;  // K x N
  ComplexMatrix s;   // N x M
  ComplexMatrix g;   // N x M
  RealVector beta;   // N
  double power = 1.0;
  double efficiency = 1.0;

  Index antennas() const { return hd.cols(); }
  Index users() const { return hd.rows(); }
  Index elements() const { return hr.cols(); }

  void validate() const;
};

/// Assemble a realization from raw blocks, forming G = diag(beta) * S.
ChannelRealization make_realization(ComplexMatrix hd, ComplexMatrix hr, ComplexMatrix s, RealVector beta,
                                    double power, double efficiency = 1.0);

/// entry k = exp(-j 2 pi k delta), k = 0..count-1.
ComplexVector steering_vector(Index count, double delta);

/// rho * exp(-j 2 pi d / lambda) * e_r * e_t^H.
ComplexMatrix los_rank_one(double rho, double distance, double wavelength, const ComplexVector& e_r,
                           const ComplexVector& e_t);

/// sqrt(gain) * (sqrt(k/(1+k)) LoS + sqrt(1/(1+k)) W), W ~ CN(0,1) i.i.d.
/// kappa >= kLosRicianFactor is treated as pure LoS; kappa = 0 ignores `los`.
ComplexMatrix rician(Index rows, Index cols, double kappa, const ComplexMatrix& los, double pathloss_gain,
                     Rng& rng);

inline constexpr double kLosRicianFactor = 1e5;

/// Unit-reference path-loss gain d^-n.
double pathloss_gain(double distance, double exponent);

struct ScenarioLayout {
  std::array<double, 2> bs{};
  std::vector<std::array<double, 2>> ris;
  std::vector<std::array<double, 2>> user_positions;
  std::vector<int> user_cluster;  // surface index each user belongs to
};

/// Positions implied by the configuration (recorded in output metadata).
ScenarioLayout scenario_layout(const ScenarioConfig& cfg, const std::vector<RisConfig>& ris);

/// Default surfaces for `cfg`: element counts per surface with unit amplitude,
/// placed per the layout convention above.
std::vector<RisConfig> default_surfaces(const ScenarioConfig& cfg, const std::vector<int>& element_counts,
                                        double amplitude = 1.0);

/// Draw a realization for the deployment. Users in cluster i see RIS i over a
/// Rician(rician_hr) link and the other surfaces over Rayleigh links; H_d is
/// Rayleigh; BS -> RIS links are Rician(rician_g) with ULA LoS components.
ChannelRealization make_scenario(const ScenarioConfig& cfg, const std::vector<RisConfig>& ris, Rng& rng);

/// H = H_r diag(exp(j theta)) G + H_d.
ComplexMatrix composite_channel(const ChannelRealization& real, const RealVector& theta);

/// eta * |h_k^H x|^2 per user, where h_k^H is row k of H.
RealVector received_powers(const ComplexMatrix& h, const ComplexVector& x, double efficiency);

/// Idealised channel families used by the analysis experiments (H_d = 0).
enum class ChannelModel {
  kLosG,        // G line-of-sight rank one, H_r Rayleigh
  kRayleigh,    // G and H_r Rayleigh
  kLosHr,       // G Rayleigh, H_r line-of-sight per user
  kRician,      // G and H_r Rician with factor 2
};

std::string to_string(ChannelModel model);
ChannelModel channel_model_from_string(const std::string& tag);

/// Parameters for the idealised families.
struct IdealChannelSpec {
  Index antennas = 4;
  Index users = 4;
  Index elements = 64;
  ChannelModel model = ChannelModel::kLosG;
  double rho_g = 1.0;
  double rho_h = 1.0;
  /// When set, H_r entries have variance rho_h^2 / N instead of rho_h^2.
  bool normalize_hr = false;
  double power = 1.0;
  double delta_r = 0.25;  // e_r spacing constant
  double delta_t = 0.25;  // e_t spacing constant
};

ChannelRealization make_ideal(const IdealChannelSpec& spec, Rng& rng);

}  // namespace cewpt
