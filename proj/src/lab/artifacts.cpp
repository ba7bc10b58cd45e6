#include "hardylab/lab/artifacts.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace hardylab::lab {

Check check_le(std::string name, double value, double bound) { return {std::move(name), value, "<=", bound, value <= bound}; }
Check check_ge(std::string name, double value, double bound) { return {std::move(name), value, ">=", bound, value >= bound}; }
Check check_lt(std::string name, double value, double bound) { return {std::move(name), value, "<", bound, value < bound}; }
Check check_gt(std::string name, double value, double bound) { return {std::move(name), value, ">", bound, value > bound}; }
Check check_true(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, "==", 1.0, ok}; }

CsvWriter::CsvWriter(const LabConfig& cfg, const std::string& experiment, const std::vector<std::string>& header) {
  text_ = "# hardylab " + experiment + "\n";
  for (const auto& [k, v] : snapshot(cfg)) text_ += "# " + k + " = " + v + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + format_double(values[i]);
  text_ += "\n";
  return *this;
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + values[i];
  text_ += "\n";
  return *this;
}

Artifact CsvWriter::finish(std::string name) const { return {std::move(name), text_}; }

std::string CsvWriter::body(const std::string& csv) {
  std::size_t pos = 0;
  while (pos < csv.size() && csv[pos] == '#') {
    const auto nl = csv.find('\n', pos);
    if (nl == std::string::npos) return {};
    pos = nl + 1;
  }
  return csv.substr(pos);
}

nlohmann::json config_json(const LabConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : snapshot(cfg)) j[k] = v;
  return j;
}

Artifact json_artifact(std::string name, const LabConfig& cfg, const std::string& experiment, nlohmann::json payload) {
  nlohmann::json doc;
  doc["experiment"] = experiment;
  doc["config"] = config_json(cfg);
  doc["result"] = std::move(payload);
  return {std::move(name), doc.dump(2) + "\n"};
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

}  // namespace hardylab::lab
