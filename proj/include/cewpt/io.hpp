#pragma once

#include "cewpt/solution.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cewpt {

/// Flat `key = value` configuration with dotted section prefixes. Blank
/// lines and `#` comments are ignored; lists are comma separated.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::istream& in, const std::string& origin = "<config>");
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<long long> get_ints(const std::string& key, const std::vector<long long>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Keys present in the file that no getter asked for.
  std::vector<std::string> unused_keys() const;
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  const std::string* find(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

/// JSON with keys alpha, theta, objective, user_powers, trace, status,
/// iterations and max_violation.
nlohmann::ordered_json solution_to_json(const BeamformerSolution& sol);

/// Channel dump: CSV with header matrix,row,col,re,im. Each matrix (hd, hr,
/// s, beta) is preceded by a `dim:<name>` row carrying its shape in the
/// row/col fields; `power` and `efficiency` are scalar rows.
void write_channel_csv(std::ostream& out, const ChannelRealization& real);
ChannelRealization read_channel_csv(std::istream& in);

/// 64-bit FNV-1a of a byte string and of a file's contents.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir;
  std::string version;
  double wall_clock_ms = 0.0;
  std::string started_utc;
  std::vector<std::pair<std::string, std::uint64_t>> artifacts;  // file name, checksum

  nlohmann::ordered_json to_json() const;
};

/// Library version string.
const char* version();

}  // namespace cewpt
