#pragma once

#include <cstdlib>
#include <string>

#include "robosim/scenario.hpp"

namespace robosim::test {

inline std::string scenario_dir() {
  if (const char* d = std::getenv("ROBOSIM_SCENARIO_DIR")) return d;
  return "scenarios";
}

inline Scenario load_scenario(const std::string& name) {
  return Scenario::load_file(scenario_dir() + "/" + name + ".json");
}

}  // namespace robosim::test
