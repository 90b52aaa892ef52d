#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "binlab/instance.hpp"

namespace binlab {

// Line-oriented text format:
//
//   <capacity> <n_items> <seed> <dist_tag>
//   <size>
//   ...            (n_items lines)
//
// Readers validate the header count and every size against the capacity.
void write_instance_text(std::ostream& out, const Instance& instance);
Instance read_instance_text(std::istream& in);

nlohmann::json to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

// Picks the format by extension (.json or anything else for text).
void save_instance(const std::filesystem::path& path, const Instance& instance);
Instance load_instance(const std::filesystem::path& path);

}  // namespace binlab
