#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "hardylab/lab/artifacts.hpp"
#include "hardylab/lab/config.hpp"

namespace hardylab::lab {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInvalidConfig = 2,
  kSupercritical = 3,
  kNumericalFault = 4,
  kIoError = 5,
};

struct RunOptions {
  std::string subcommand;
  LabConfig config;
  std::string out_base = "lab_out";
  bool check = false;
};

struct RunManifest {
  nlohmann::json config;
  std::string version = kVersion;
  std::string subcommand;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> digests;  // file, sha256
  // kept out of manifest.json so reruns produce identical manifests
  std::string started_utc;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
};

struct RunResult {
  int exit_code = kOk;
  std::string run_dir;
  RunManifest manifest;
};

// Creates <out_base>/<subcommand>-<UTC stamp>[-n] and writes artifacts, manifest.json and timing.json.
RunResult run(const RunOptions& opts);

nlohmann::json error_json(const std::string& code, int exit_code, const std::string& message);

}  // namespace hardylab::lab
