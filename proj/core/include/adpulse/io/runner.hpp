#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adpulse/io/scenario.hpp"

namespace adpulse::io {

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides scenario.output_dir
  bool plots = true;
};

struct RunReport {
  std::filesystem::path out_dir;
  std::vector<std::string> artifacts;  // file names inside out_dir, in write order
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, std::string>> summary;

  const std::string* find(const std::string& key) const;
};

// Runs `action` (which need not be the scenario's default) and writes
// resolved.cfg, the action's CSVs, SVG plots and manifest.json into the output directory.
// Library errors are rethrown with the same type and the scenario name prefixed.
RunReport run_scenario(const Scenario& scenario, Action action, const RunOptions& options = {});
inline RunReport run_scenario(const Scenario& scenario, const RunOptions& options = {}) {
  return run_scenario(scenario, scenario.action, options);
}

std::uint64_t fnv1a64(std::string_view data);

}  // namespace adpulse::io
