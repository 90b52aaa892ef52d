#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace binlab {

// Bin capacity plus an ordered stream of integer item sizes.
struct Instance {
  int capacity = 0;
  std::vector<int> items;
  std::string meta;  // distribution tag, e.g. "uniform(20,100)"
  std::uint64_t seed = 0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws ParameterError unless capacity >= 1, items non-empty and every
// size lies in [1, capacity].
void validate(const Instance& instance);

}  // namespace binlab
