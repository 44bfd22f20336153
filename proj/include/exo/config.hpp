#pragma once

// Line-oriented scenario files:
//
//   # comment
//   scenario.preset = paper_v
//   sync.beta = 30
//   init.xi = 0.05, -0.04, -0.03, 0.04
//
// Keys are flat and dotted. Omitted keys keep the value of the base preset
// (scenario.preset, default nominal). Unknown or repeated keys are errors.
// Angles are radians, times seconds.

#include "exo/scenario.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace exo {

/// Throws ConfigError naming the offending key or line.
Scenario parse_config(std::string_view text);

/// Applies `key = value` assignments on top of an existing scenario. The
/// preset key is not accepted here since it would discard earlier settings.
void apply_overrides(Scenario& s, const std::vector<std::string>& assignments);

/// Throws ConfigError if the file cannot be read.
Scenario load_config(const std::string& path);

/// Every key with its current value; parse_config(dump_config(s)) == s.
std::string dump_config(const Scenario& s);

/// All accepted keys in dump order.
std::vector<std::string> config_keys();

/// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace exo
