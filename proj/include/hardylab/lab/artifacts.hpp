#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "hardylab/lab/config.hpp"

namespace hardylab::lab {

struct Check {
  std::string name;
  double value;
  std::string relation;  // "<=", ">=", "<", ">", "=="
  double bound;
  bool pass;
};

Check check_le(std::string name, double value, double bound);
Check check_ge(std::string name, double value, double bound);
Check check_lt(std::string name, double value, double bound);
Check check_gt(std::string name, double value, double bound);
Check check_true(std::string name, bool ok);

struct Artifact {
  std::string name;
  std::string content;
};

// CSV with '#' preamble lines carrying the config, then a header row; '.' decimal, ',' separator.
class CsvWriter {
 public:
  CsvWriter(const LabConfig& cfg, const std::string& experiment, const std::vector<std::string>& header);
  CsvWriter& row(const std::vector<double>& values);
  CsvWriter& row(const std::vector<std::string>& values);
  Artifact finish(std::string name) const;
  // Body only (header and data rows), without the preamble.
  static std::string body(const std::string& csv);

 private:
  std::string text_;
};

nlohmann::json config_json(const LabConfig& cfg);
// JSON artifact with the config embedded under "config".
Artifact json_artifact(std::string name, const LabConfig& cfg, const std::string& experiment, nlohmann::json payload);

std::string sha256_hex(const std::string& data);

struct ExperimentOutput {
  std::vector<Check> checks;
  std::vector<Artifact> files;
};

}  // namespace hardylab::lab
