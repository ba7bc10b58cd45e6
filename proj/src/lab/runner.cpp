#include "hardylab/lab/runner.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "hardylab/lab/experiments.hpp"

namespace hardylab::lab {

namespace fs = std::filesystem;

namespace {

std::string utc_stamp(std::chrono::system_clock::time_point tp, const char* fmt) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, fmt, &tm);
  return buf;
}

fs::path fresh_dir(const fs::path& base, const std::string& stem) {
  fs::create_directories(base);
  fs::path p = base / stem;
  for (int n = 1; fs::exists(p); ++n) p = base / (stem + "-" + std::to_string(n));
  fs::create_directory(p);
  return p;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw fs::filesystem_error("cannot open for writing", p, std::make_error_code(std::errc::io_error));
  out << content;
  if (!out) throw fs::filesystem_error("write failed", p, std::make_error_code(std::errc::io_error));
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  nlohmann::json checks_j = nlohmann::json::array();
  for (const auto& c : checks)
    checks_j.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound}, {"pass", c.pass}});
  nlohmann::json dig = nlohmann::json::object();
  for (const auto& [f, d] : digests) dig[f] = d;
  return {{"version", version}, {"subcommand", subcommand}, {"config", config}, {"checks", checks_j}, {"digests", dig}};
}

RunResult run(const RunOptions& opts) {
  if (!is_subcommand(opts.subcommand)) throw std::invalid_argument("unknown subcommand '" + opts.subcommand + "'");
  validate(opts.config);

  const auto start = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentOutput out = run_experiment(opts.subcommand, opts.config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunResult res;
  res.manifest.config = config_json(opts.config);
  res.manifest.subcommand = opts.subcommand;
  res.manifest.checks = out.checks;
  res.manifest.started_utc = utc_stamp(start, "%Y-%m-%dT%H:%M:%SZ");
  res.manifest.wall_seconds = wall;

  const fs::path dir = fresh_dir(opts.out_base, opts.subcommand + "-" + utc_stamp(start, "%Y%m%dT%H%M%SZ"));
  res.run_dir = dir.string();
  for (const auto& a : out.files) {
    write_file(dir / a.name, a.content);
    res.manifest.digests.emplace_back(a.name, sha256_hex(a.content));
  }
  write_file(dir / "manifest.json", res.manifest.to_json().dump(2) + "\n");
  const nlohmann::json timing{{"started_utc", res.manifest.started_utc}, {"wall_seconds", wall}};
  write_file(dir / "timing.json", timing.dump(2) + "\n");

  bool ok = true;
  for (const auto& c : out.checks) ok = ok && c.pass;
  res.exit_code = (opts.check && !ok) ? kCheckFailed : kOk;
  return res;
}

nlohmann::json error_json(const std::string& code, int exit_code, const std::string& message) {
  return {{"error", code}, {"exit_code", exit_code}, {"message", message}};
}

}  // namespace hardylab::lab
