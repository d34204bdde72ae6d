#pragma once

#include <iosfwd>
#include <string>

#include "hyfso/engine.hpp"

namespace hyfso {

// Plain-text scenario format, INI-style: sections [network] [links] [sweep]
// [policies] [run], `key = value` lines, `#` comments. Section order in the
// file does not matter. See README for the full key reference. Malformed
// input throws std::invalid_argument naming the offending section.key (or
// line number for structural errors).
Scenario parse_scenario(std::istream& in);

// Reads and parses a scenario file. A missing file throws std::runtime_error
// "scenario file not found: <path>".
Scenario load_scenario(const std::string& path);

}  // namespace hyfso
