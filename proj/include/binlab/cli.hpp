#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace binlab {

// Flat experiment configuration: key -> textual value. Keys use
// underscores (n_items, a_range); the matching flags use dashes.
using Settings = std::map<std::string, std::string>;

// Parses a config file body. Accepts a JSON object, flat `key = value`
// lines, or a provenance comment ("# binlab <cmd> k=v ...") as written at
// the top of every CSV; in the last case only that first line is read.
// Throws FormatError on malformed input or unknown keys.
Settings parse_config_text(std::string_view text);

// The provenance comment for a command and its effective settings
// (without the leading "# ").
std::string provenance_line(std::string_view command, const Settings& settings);

// Entry point. `args` excludes the program name. Returns the exit code:
// 0 success, 2 usage or validation error, 1 runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace binlab
