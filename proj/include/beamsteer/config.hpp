#pragma once

#include <string>
#include <vector>

#include "beamsteer/engine.hpp"

// Strict scenario-config text format: one "key = value" per line, `#`
// comments. Unknown keys are fatal (with an edit-distance suggestion),
// since a silently ignored typo in a gain invalidates any comparison run.
// parse_config(emit_config(c)) == c, and emit_config echoes every default
// for provenance.

namespace beamsteer::cfg {

sim::ScenarioConfig parse_config(const std::string& text);
sim::ScenarioConfig load_config(const std::string& path);
std::string emit_config(const sim::ScenarioConfig& config);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

// Documented key set, in canonical emission order.
const std::vector<std::string>& config_keys();

}  // namespace beamsteer::cfg
