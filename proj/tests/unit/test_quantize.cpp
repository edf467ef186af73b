#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cewpt/quantize.hpp"
#include "cewpt/spm_sca.hpp"

#include <cmath>

using namespace cewpt;

TEST_CASE("codebook phases are cell midpoints") {
  RealVector p = PhaseCodebook{2}.phases();
  REQUIRE(p.size() == 4);
  CHECK(p[0] == doctest::Approx(kPi / 4));
  CHECK(p[3] == doctest::Approx(7 * kPi / 4));
  CHECK_THROWS_AS(PhaseCodebook{0}.validate(), ConfigError);
}

TEST_CASE("project_codebook worked examples") {
  RealVector t(1);
  t << 0.1;
  CHECK(project_codebook(t, {1})[0] == doctest::Approx(kPi / 2));
  CHECK(project_codebook(t, {2})[0] == doctest::Approx(kPi / 4));
  t << -0.1;  // wraps to just below 2 pi
  CHECK(project_codebook(t, {1})[0] == doctest::Approx(3 * kPi / 2));
  t << kPi;  // cell boundaries belong to the upper cell
  CHECK(project_codebook(t, {1})[0] == doctest::Approx(3 * kPi / 2));
  t << 0.0;
  CHECK(project_codebook(t, {2})[0] == doctest::Approx(kPi / 4));
}

TEST_CASE("project_codebook is idempotent, bounded and rotation-covariant") {
  Rng rng(3);
  RealVector theta = 4.0 * sample_phases(500, rng);
  for (int b = 1; b <= 5; ++b) {
    PhaseCodebook cb{b};
    RealVector q = project_codebook(theta, cb);
    CHECK((project_codebook(q, cb) - q).cwiseAbs().maxCoeff() < 1e-12);
    const double step = 2.0 * kPi / cb.size();
    for (Index i = 0; i < theta.size(); ++i) {
      double err = std::remainder(q[i] - theta[i], 2.0 * kPi);
      CHECK(std::abs(err) <= kPi / cb.size() + 1e-12);
    }
    RealVector shifted = project_codebook((theta.array() + 3.0 * step).matrix(), cb);
    for (Index i = 0; i < theta.size(); ++i)
      CHECK(std::abs(std::remainder(shifted[i] - q[i] - 3.0 * step, 2.0 * kPi)) < 1e-9);
  }
}

TEST_CASE("prop2_bound values and monotonicity") {
  CHECK(prop2_bound(1) == doctest::Approx(4.0 / (kPi * kPi)));
  CHECK(prop2_bound(1) == doctest::Approx(0.4053).epsilon(1e-4));
  CHECK(prop2_bound(2) == doctest::Approx(0.8106).epsilon(1e-4));
  CHECK(prop2_bound(3) == doctest::Approx(0.9496).epsilon(1e-4));
  CHECK(10.0 * std::log10(prop2_bound(1)) == doctest::Approx(-3.92).epsilon(1e-3));
  CHECK(10.0 * std::log10(prop2_bound(2)) == doctest::Approx(-0.91).epsilon(3e-3));
  for (int b = 1; b < 16; ++b) CHECK(prop2_bound(b + 1) > prop2_bound(b));
  CHECK(prop2_bound(30) <= 1.0);
  CHECK_THROWS_AS(prop2_bound(0), ConfigError);
}

TEST_CASE("ratio of means with delta-method error") {
  RatioStat r = ratio_of_means({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0});
  CHECK(r.ratio == doctest::Approx(0.5));
  CHECK(r.stderr_ == doctest::Approx(0.0));
  RatioStat s = ratio_of_means({1.0, 3.0}, {2.0, 2.0});
  CHECK(s.ratio == doctest::Approx(1.0));
  CHECK(s.stderr_ > 0.0);
}

namespace {

RealizationSource ideal_source(Index m, Index k, Index n, std::uint64_t seed) {
  return [=](std::uint64_t t) {
    IdealChannelSpec spec;
    spec.antennas = m;
    spec.users = k;
    spec.elements = n;
    Rng rng(mix_seed(seed, t));
    return make_ideal(spec, rng);
  };
}

}  // namespace

TEST_CASE("fine codebooks lose nothing") {
  QuantizationEstimate e = quantized_power_ratio(ideal_source(4, 4, 32, 1), SolverConfig{}, PhaseCodebook{16}, 10);
  CHECK(e.ratio == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("a single element and user is phase invariant") {
  QuantizationEstimate e = quantized_power_ratio(ideal_source(1, 1, 1, 2), SolverConfig{}, PhaseCodebook{1}, 20);
  CHECK(e.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quantisation does not raise the continuous optimum and threads do not change the estimate") {
  std::vector<PhaseCodebook> books{{1}, {2}, {3}};
  auto serial = quantized_power_ratio(ideal_source(4, 4, 64, 3), SolverConfig{}, books, 30, 1);
  auto parallel = quantized_power_ratio(ideal_source(4, 4, 64, 3), SolverConfig{}, books, 30, 4);
  for (std::size_t i = 0; i < books.size(); ++i) {
    CHECK(serial[i].increases == 0);
    CHECK(serial[i].ratio == parallel[i].ratio);
    CHECK(serial[i].stderr_ == parallel[i].stderr_);
  }
  CHECK(serial[0].ratio < serial[1].ratio);
  CHECK(serial[1].ratio < serial[2].ratio);
  CHECK_THROWS_AS(quantized_power_ratio(ideal_source(1, 1, 1, 2), SolverConfig{}, PhaseCodebook{1}, 0), ConfigError);
}
