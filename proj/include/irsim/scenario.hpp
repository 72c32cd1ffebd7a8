#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irsim/engine.hpp"

namespace irsim {

/// A parsed scenario document (JSON, "version": 1).
struct ScenarioSpec {
  std::optional<std::filesystem::path> topology;  // as written, relative to the file
  std::map<std::string, AsId> names;
  std::vector<Protocol> protocols;
  Scenario scenario;
  std::optional<Tick> quiesce_limit;
  Tick default_delay = 1;
  std::map<LinkKey, Tick> link_delays;
  MiroConfig miro;
  RbgpOptions rbgp;
};

/// Parses a scenario document. In strict mode unknown keys are errors;
/// otherwise they are ignored. Throws ValidationError.
ScenarioSpec parse_scenario(std::string_view json_text, bool strict = true);

/// Reads and parses a file; a relative `topology` is resolved against the
/// file's directory. Throws IoError or ValidationError.
ScenarioSpec load_scenario_file(const std::filesystem::path& path, bool strict = true);

/// Checks every AS and link the scenario mentions against `graph`.
void validate_scenario(const ScenarioSpec& spec, const AsGraph& graph);

/// Simulator settings for one protocol of the scenario.
SimConfig sim_config(const ScenarioSpec& spec, Protocol protocol);

}  // namespace irsim
