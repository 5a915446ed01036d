#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "gridrisk/attack_graph.hpp"
#include "gridrisk/copt.hpp"
#include "gridrisk/fleet.hpp"
#include "gridrisk/montecarlo.hpp"

namespace gridrisk {

struct LoadFromFile {
  std::filesystem::path path;
};

using LoadSource = std::variant<SynthProfileParams, LoadFromFile>;

// A scenario file with every default filled in and every referenced file loaded.
struct Scenario {
  std::string label;
  std::filesystem::path source;      // scenario file it came from
  std::filesystem::path output_dir;  // empty: caller decides
  Fleet fleet;
  LoadSource load_source;
  LoadProfile profile;
  AttackGraph attack;
  std::string attack_target;
  CyberScenario cyber;  // inactive when the file has no [cyber] table
  McConfig mc;
  CoptOptions copt;
};

// Parses and validates a scenario file. Relative paths resolve against the file's directory.
// Throws ParseError / ValidationError (and the module errors) naming file, section and field.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(std::string_view text, const std::filesystem::path& source);

// Self-contained TOML: fleet units and attack graph inline, load as synth parameters or a
// path to `load_file_name` (the caller writes the profile next to it).
std::string resolved_toml(const Scenario& scenario, const std::string& load_file_name = "load.txt");

// SHA-256 over a canonical rendering of every resolved input (fleet, load values, attack
// graph, cyber, Monte Carlo and COPT settings, label). Output paths and worker count excluded.
std::string scenario_hash(const Scenario& scenario);

}  // namespace gridrisk
