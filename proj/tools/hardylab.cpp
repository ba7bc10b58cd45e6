#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "hardylab/errors.hpp"
#include "hardylab/lab/experiments.hpp"
#include "hardylab/lab/runner.hpp"

using namespace hardylab;

namespace {

int fail(const std::string& code, int exit_code, const std::string& msg) {
  std::cerr << lab::error_json(code, exit_code, msg).dump() << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for Schrodinger equations with inverse-square potentials"};
  app.set_version_flag("--version", std::string(lab::kVersion));

  std::string subcommand;
  std::string config_path;
  std::string out_dir = "lab_out";
  std::optional<std::uint64_t> seed;
  bool check = false;
  std::vector<std::string> sets;

  std::string names;
  for (const auto& n : lab::experiment_names()) names += n + ", ";
  app.add_option("subcommand", subcommand, "one of: " + names + "all")->required();
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out_dir, "output base directory (LAB_OUT overrides)");
  app.add_option("--seed", seed, "RNG seed");
  app.add_flag("--check", check, "exit nonzero on any tolerance breach");
  app.add_option("--set", sets, "override one config key, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", lab::kInvalidConfig, e.what());
  }

  if (const char* env = std::getenv("LAB_OUT"); env && *env) out_dir = env;

  lab::RunOptions opts;
  opts.subcommand = subcommand;
  opts.out_base = out_dir;
  opts.check = check;
  try {
    if (!lab::is_subcommand(subcommand)) return fail("invalid_config", lab::kInvalidConfig, "unknown subcommand '" + subcommand + "'");
    if (!config_path.empty()) opts.config = lab::load_config(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) return fail("invalid_config", lab::kInvalidConfig, "--set expects key=value, got '" + s + "'");
      lab::apply_setting(opts.config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (seed) opts.config.seed = *seed;

    const auto res = lab::run(opts);
    for (const auto& c : res.manifest.checks)
      std::cout << (c.pass ? "ok   " : "FAIL ") << c.name << " = " << lab::format_double(c.value) << " " << c.relation << " "
                << lab::format_double(c.bound) << "\n";
    std::cout << "artifacts: " << res.run_dir << "\n";
    return res.exit_code;
  } catch (const SupercriticalCoupling& e) {
    return fail("supercritical_coupling", lab::kSupercritical, e.what());
  } catch (const lab::ConfigError& e) {
    return fail("invalid_config", lab::kInvalidConfig, e.what());
  } catch (const NumericalFault& e) {
    return fail("numerical_fault", lab::kNumericalFault, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io_error", lab::kIoError, e.what());
  } catch (const std::invalid_argument& e) {
    return fail("invalid_config", lab::kInvalidConfig, e.what());
  }
}
