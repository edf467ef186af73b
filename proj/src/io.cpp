#include "cewpt/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef CEWPT_VERSION
#define CEWPT_VERSION "0.0.0"
#endif

namespace cewpt {

using nlohmann::ordered_json;

const char* version() { return CEWPT_VERSION; }

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) throw ConfigError("config: " + key + " expects a number, got '" + text + "'");
  return v;
}

long long to_int(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty())
    throw ConfigError("config: " + key + " expects an integer, got '" + text + "'");
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& origin) {
  KeyValueConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key)) throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse(in, path);
}

const std::string* KeyValueConfig::find(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

void KeyValueConfig::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const std::string* v = find(key);
  return v ? to_double(key, *v) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  const std::string* v = find(key);
  return v ? to_int(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  if (v->empty() || !std::all_of(v->begin(), v->end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ConfigError("config: " + key + " expects an unsigned integer, got '" + *v + "'");
  return std::stoull(*v);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("config: " + key + " expects true/false, got '" + *v + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) out.push_back(to_double(key, item));
  return out;
}

std::vector<long long> KeyValueConfig::get_ints(const std::string& key,
                                                const std::vector<long long>& fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  std::vector<long long> out;
  for (const auto& item : split_list(*v)) out.push_back(to_int(key, item));
  return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key,
                                                     const std::vector<std::string>& fallback) const {
  const std::string* v = find(key);
  return v ? split_list(*v) : fallback;
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

ordered_json solution_to_json(const BeamformerSolution& sol) {
  auto vec = [](const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  ordered_json j;
  j["alpha"] = vec(sol.alpha);
  j["theta"] = vec(sol.theta);
  j["objective"] = sol.objective;
  j["user_powers"] = vec(sol.user_powers);
  j["trace"] = sol.trace;
  j["status"] = to_string(sol.status);
  j["iterations"] = sol.iterations;
  j["max_violation"] = sol.max_violation;
  return j;
}

void write_channel_csv(std::ostream& out, const ChannelRealization& real) {
  out << "matrix,row,col,re,im\n";
  auto dump = [&](const std::string& name, const ComplexMatrix& m) {
    out << "dim:" << name << ',' << m.rows() << ',' << m.cols() << ",0,0\n";
    for (Index c = 0; c < m.cols(); ++c)
      for (Index r = 0; r < m.rows(); ++r)
        out << name << ',' << r << ',' << c << ',' << format_double(m(r, c).real()) << ','
            << format_double(m(r, c).imag()) << '\n';
  };
  dump("hd", real.hd);
  dump("hr", real.hr);
  dump("s", real.s);
  dump("beta", real.beta.cast<Complex>());
  out << "power,0,0," << format_double(real.power) << ",0\n";
  out << "efficiency,0,0," << format_double(real.efficiency) << ",0\n";
}

ChannelRealization read_channel_csv(std::istream& in) {
  std::map<std::string, ComplexMatrix> mats;
  double power = 1.0, efficiency = 1.0;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "matrix,row,col,re,im")
    throw ConfigError("channel csv: missing header");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_list(line);
    if (f.size() != 5) throw ConfigError("channel csv: line " + std::to_string(lineno) + " needs 5 fields");
    const std::string& name = f[0];
    long long r = to_int("row", f[1]), c = to_int("col", f[2]);
    double re = to_double("re", f[3]), im = to_double("im", f[4]);
    if (name.rfind("dim:", 0) == 0) {
      if (r < 0 || c < 0) throw ConfigError("channel csv: negative shape");
      mats[name.substr(4)] = ComplexMatrix::Zero(r, c);
    } else if (name == "power") {
      power = re;
    } else if (name == "efficiency") {
      efficiency = re;
    } else {
      auto it = mats.find(name);
      if (it == mats.end()) throw ConfigError("channel csv: entry for " + name + " before its dim row");
      if (r < 0 || c < 0 || r >= it->second.rows() || c >= it->second.cols())
        throw ConfigError("channel csv: index out of range at line " + std::to_string(lineno));
      it->second(r, c) = Complex(re, im);
    }
  }
  for (const char* name : {"hd", "hr", "s", "beta"})
    if (!mats.count(name)) throw ConfigError(std::string("channel csv: missing matrix ") + name);
  if (mats["beta"].cols() != 1) throw ConfigError("channel csv: beta must be a single column");
  RealVector beta = mats["beta"].col(0).real();
  return make_realization(mats["hd"], mats["hr"], mats["s"], beta, power, efficiency);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["config_path"] = config_path;
  j["seed"] = seed;
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  j["version"] = version;
  j["started_utc"] = started_utc;
  j["wall_clock_ms"] = wall_clock_ms;
  ordered_json files = ordered_json::array();
  for (const auto& [name, sum] : artifacts) {
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << sum;
    files.push_back({{"file", name}, {"fnv1a64", hex.str()}});
  }
  j["artifacts"] = files;
  return j;
}

}  // namespace cewpt
