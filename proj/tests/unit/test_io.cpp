#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cewpt/io.hpp"
#include "cewpt/spm_sca.hpp"
#include "test_support.hpp"

#include <sstream>

using namespace cewpt;

TEST_CASE("key-value parsing") {
  std::istringstream in(
      "# comment\n"
      "scenario.antennas = 6   # trailing comment\n"
      "\n"
      "experiment.elements = 10, 20,40\n"
      "run.svg = true\n"
      "name = hello\n");
  KeyValueConfig cfg = KeyValueConfig::parse(in);
  CHECK(cfg.get_int("scenario.antennas", 0) == 6);
  CHECK(cfg.get_ints("experiment.elements", {}) == std::vector<long long>{10, 20, 40});
  CHECK(cfg.get_bool("run.svg", false));
  CHECK(cfg.get_double("missing", 2.5) == 2.5);
  CHECK(cfg.unused_keys() == std::vector<std::string>{"name"});
  CHECK(cfg.get_doubles("experiment.elements", {}) == std::vector<double>{10, 20, 40});
}

TEST_CASE("malformed configuration") {
  std::istringstream no_eq("scenario.antennas 4\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(no_eq), ConfigError);
  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(dup), ConfigError);
  std::istringstream bad("a = 1x\nb = maybe\nc = -3\n");
  KeyValueConfig cfg = KeyValueConfig::parse(bad);
  CHECK_THROWS_AS(cfg.get_double("a", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_bool("b", false), ConfigError);
  CHECK_THROWS_AS(cfg.get_u64("c", 0), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("channel CSV round trip is exact") {
  ChannelRealization real = testing_support::random_realization(3, 5, 2, 4, 2.5);
  real.efficiency = 0.7;
  std::ostringstream out;
  write_channel_csv(out, real);
  std::istringstream in(out.str());
  ChannelRealization back = read_channel_csv(in);
  CHECK(back.hd == real.hd);
  CHECK(back.hr == real.hr);
  CHECK(back.g == real.g);
  CHECK(back.power == 2.5);
  CHECK(back.efficiency == 0.7);

  ChannelRealization bare = testing_support::random_realization(2, 0, 1, 5);
  std::ostringstream out2;
  write_channel_csv(out2, bare);
  std::istringstream in2(out2.str());
  CHECK(read_channel_csv(in2).elements() == 0);

  std::istringstream junk("matrix,row,col,re,im\nhd,0,0,1,0\n");
  CHECK_THROWS_AS(read_channel_csv(junk), ConfigError);
}

TEST_CASE("solution JSON carries the documented keys") {
  ChannelRealization real = testing_support::random_realization(2, 3, 2, 6);
  auto j = solution_to_json(solve_spm_sca(real, SolverConfig{}));
  for (const char* key : {"alpha", "theta", "objective", "user_powers", "trace", "status"}) CHECK(j.contains(key));
  CHECK(j["alpha"].size() == 2);
  CHECK(j["theta"].size() == 3);
  CHECK(j["status"] == "Converged");
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("manifest JSON") {
  RunManifest m;
  m.command = "solve";
  m.artifacts.emplace_back("solution.json", 0x1ULL);
  auto j = m.to_json();
  CHECK(j["artifacts"][0]["fnv1a64"] == "0000000000000001");
  CHECK(j.contains("wall_clock_ms"));
}
