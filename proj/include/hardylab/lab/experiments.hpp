#pragma once

#include <string>
#include <vector>

#include "hardylab/lab/artifacts.hpp"
#include "hardylab/lab/config.hpp"

namespace hardylab::lab {

const std::vector<std::string>& experiment_names();  // without "all"
bool is_subcommand(const std::string& name);

// Runs one experiment (or every experiment for "all") fully in memory.
ExperimentOutput run_experiment(const std::string& name, const LabConfig& cfg);

}  // namespace hardylab::lab
