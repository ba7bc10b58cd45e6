#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardylab::lab {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message) : std::invalid_argument(message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct MaskSpec {
  enum class Kind { Interval, FatCantor };
  Kind kind = Kind::Interval;
  double a = 0.3;
  double b = 0.6;

  std::string str() const;
};

struct LabConfig {
  int dimension = 3;
  double lambda = 0.0;
  long n_interior = 800;
  long n_ang = 1024;
  long time_steps = 1000;
  double horizon = 1.0;
  long k_modes = 8;
  long spectrum_modes = 5;
  int k_trunc = 48;
  MaskSpec mask;
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  long hum_steps = 4000;
  long profile_samples = 10001;
  long random_vectors = 1000;
  long titchmarsh_pairs = 20;
  std::uint64_t seed = 20240601;
  std::map<std::string, double> tolerances;

  double tol(const std::string& name) const;
};

// Defaults for every tolerance key; config keys are "tol.<name>".
const std::map<std::string, double>& default_tolerances();

// key = value lines; '#' starts a comment; unknown keys are errors.
LabConfig parse_config(std::istream& in);
LabConfig load_config(const std::string& path);
// Applies one "key=value" override.
void apply_setting(LabConfig& cfg, const std::string& key, const std::string& value);
// Module preconditions; throws ConfigError or SupercriticalCoupling.
void validate(const LabConfig& cfg);

// Canonical key/value listing, in a fixed order.
std::vector<std::pair<std::string, std::string>> snapshot(const LabConfig& cfg);

std::string format_double(double x);

}  // namespace hardylab::lab
