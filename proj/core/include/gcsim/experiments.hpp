#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gcsim/io.hpp"

namespace gcsim {

inline constexpr const char* kVersion = "0.1.0";

// A named reproduction run. Parameters override the built-in defaults
// (k = 1.28e6, B = 64 for the bound sweeps); unknown names are rejected.
struct ExperimentSpec {
  std::string name;  // fig4 | fig6 | table1 | table2 | adversary-sweep |
                     // opt-vs-policies
  std::map<std::string, std::string> parameters;
  std::string out_path;  // empty -> "<name>.csv"
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  CsvTable table;
  std::string summary;  // one line for the console
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

std::vector<std::string> experiment_names();

}  // namespace gcsim
