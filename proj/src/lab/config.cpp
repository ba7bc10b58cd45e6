#include "hardylab/lab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hardylab/spectral_core.hpp"

namespace hardylab::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError(key, "config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  long x = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError(key, "config: '" + key + "' expects an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

MaskSpec parse_mask(const std::string& key, const std::string& v) {
  const auto colon = v.find(':');
  if (colon == std::string::npos) throw ConfigError(key, "config: mask must look like interval:a,b or fat_cantor:a,b");
  const std::string kind = trim(v.substr(0, colon));
  const auto ends = split(v.substr(colon + 1), ',');
  if (ends.size() != 2) throw ConfigError(key, "config: mask needs two endpoints");
  MaskSpec m;
  if (kind == "interval") m.kind = MaskSpec::Kind::Interval;
  else if (kind == "fat_cantor") m.kind = MaskSpec::Kind::FatCantor;
  else throw ConfigError(key, "config: unknown mask kind '" + kind + "'");
  m.a = to_double(key, ends[0]);
  m.b = to_double(key, ends[1]);
  return m;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string MaskSpec::str() const {
  return std::string(kind == Kind::Interval ? "interval:" : "fat_cantor:") + format_double(a) + "," + format_double(b);
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"spectrum_rel", 5e-3},      {"eigen_residual", 1e-10},  {"orthonormality", 1e-10},
      {"richardson_order", 0.2},   {"hardy", 1e-10},           {"hardy_upper", 0.30},
      {"norm_drift", 1e-12},       {"reversal", 1e-12},        {"kernel_boundary", 1e-12},
      {"kernel_residual", 1e-6},   {"kernel_tail", 1e-8},      {"elliptic", 1e-5},
      {"trace", 1e-12},            {"hermitian", 1e-14},       {"hum_defect", 1e-6},
      {"volterra", 1e-10},         {"reconstruction", 1e-3},   {"derivative_identity", 1e-8},
      {"duhamel_identity", 1e-6},  {"free_evolution", 1e-4},   {"lopp", 1e-5},
      {"pipeline", 1e-6},          {"gamma", 1e-12},           {"arc", 5e-3},
      {"blowup_rate", 0.10},       {"beta", 1e-8},             {"support_steps", 2.0},
  };
  return t;
}

double LabConfig::tol(const std::string& name) const {
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

void apply_setting(LabConfig& c, const std::string& key, const std::string& v) {
  if (key == "dimension") c.dimension = static_cast<int>(to_long(key, v));
  else if (key == "lambda") c.lambda = to_double(key, v);
  else if (key == "n_interior") c.n_interior = to_long(key, v);
  else if (key == "n_ang") c.n_ang = to_long(key, v);
  else if (key == "time_steps") c.time_steps = to_long(key, v);
  else if (key == "T") c.horizon = to_double(key, v);
  else if (key == "k_modes") c.k_modes = to_long(key, v);
  else if (key == "spectrum_modes") c.spectrum_modes = to_long(key, v);
  else if (key == "k_trunc") c.k_trunc = static_cast<int>(to_long(key, v));
  else if (key == "mask") c.mask = parse_mask(key, v);
  else if (key == "eps") {
    c.eps_list.clear();
    for (const auto& e : split(v, ',')) c.eps_list.push_back(to_double(key, e));
  } else if (key == "hum_steps") c.hum_steps = to_long(key, v);
  else if (key == "profile_samples") c.profile_samples = to_long(key, v);
  else if (key == "random_vectors") c.random_vectors = to_long(key, v);
  else if (key == "titchmarsh_pairs") c.titchmarsh_pairs = to_long(key, v);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_long(key, v));
  else if (key.rfind("tol.", 0) == 0) {
    const std::string name = key.substr(4);
    if (!default_tolerances().count(name)) throw ConfigError(key, "config: unknown tolerance '" + name + "'");
    c.tolerances[name] = to_double(key, v);
  } else {
    throw ConfigError(key, "config: unknown key '" + key + "'");
  }
}

LabConfig parse_config(std::istream& in) {
  LabConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "config: line " + std::to_string(lineno) + " is not of the form key = value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "config: cannot open '" + path + "'");
  return parse_config(in);
}

void validate(const LabConfig& c) {
  if (c.dimension < 1 || c.dimension == 2) throw ConfigError("dimension", "config: dimension must be >= 1 and != 2");
  spectral::bessel_order(c.lambda, c.dimension);  // throws SupercriticalCoupling
  if (c.n_interior < 16) throw ConfigError("n_interior", "config: n_interior must be >= 16");
  if (c.n_ang < 64) throw ConfigError("n_ang", "config: n_ang must be >= 64");
  if (c.time_steps < 10) throw ConfigError("time_steps", "config: time_steps must be >= 10");
  if (!(c.horizon > 0.0)) throw ConfigError("T", "config: T must be positive");
  if (c.k_modes < 1 || c.k_modes > c.n_interior) throw ConfigError("k_modes", "config: k_modes must lie in [1, n_interior]");
  if (c.spectrum_modes < 1 || c.spectrum_modes > c.n_interior) throw ConfigError("spectrum_modes", "config: spectrum_modes out of range");
  if (c.k_trunc < 0 || c.k_trunc > 48) throw ConfigError("k_trunc", "config: k_trunc must lie in [0, 48]");
  if (!(0.0 <= c.mask.a && c.mask.a < c.mask.b && c.mask.b <= 1.0)) throw ConfigError("mask", "config: mask needs 0 <= a < b <= 1");
  if (c.eps_list.empty()) throw ConfigError("eps", "config: eps list is empty");
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    if (!(c.eps_list[i] > 0.0)) throw ConfigError("eps", "config: eps values must be positive");
    if (i && !(c.eps_list[i] < c.eps_list[i - 1])) throw ConfigError("eps", "config: eps values must be decreasing");
  }
  if (c.hum_steps < 10) throw ConfigError("hum_steps", "config: hum_steps must be >= 10");
  if (c.profile_samples < 3) throw ConfigError("profile_samples", "config: profile_samples must be >= 3");
  if (c.random_vectors < 1) throw ConfigError("random_vectors", "config: random_vectors must be >= 1");
  if (c.titchmarsh_pairs < 1) throw ConfigError("titchmarsh_pairs", "config: titchmarsh_pairs must be >= 1");
  for (const auto& [k, v] : c.tolerances)
    if (!(v >= 0.0)) throw ConfigError("tol." + k, "config: tolerances must be nonnegative");
}

std::vector<std::pair<std::string, std::string>> snapshot(const LabConfig& c) {
  std::string eps;
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) eps += (i ? "," : "") + format_double(c.eps_list[i]);
  std::vector<std::pair<std::string, std::string>> s{
      {"dimension", std::to_string(c.dimension)},
      {"lambda", format_double(c.lambda)},
      {"n_interior", std::to_string(c.n_interior)},
      {"n_ang", std::to_string(c.n_ang)},
      {"time_steps", std::to_string(c.time_steps)},
      {"T", format_double(c.horizon)},
      {"k_modes", std::to_string(c.k_modes)},
      {"spectrum_modes", std::to_string(c.spectrum_modes)},
      {"k_trunc", std::to_string(c.k_trunc)},
      {"mask", c.mask.str()},
      {"eps", eps},
      {"hum_steps", std::to_string(c.hum_steps)},
      {"profile_samples", std::to_string(c.profile_samples)},
      {"random_vectors", std::to_string(c.random_vectors)},
      {"titchmarsh_pairs", std::to_string(c.titchmarsh_pairs)},
      {"seed", std::to_string(c.seed)},
  };
  for (const auto& [k, v] : default_tolerances()) s.emplace_back("tol." + k, format_double(c.tol(k)));
  return s;
}

}  // namespace hardylab::lab
