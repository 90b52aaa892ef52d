#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "binlab/instance.hpp"

namespace binlab {

enum class DistributionKind { UniformInt, Weibull, Adversarial, Explicit };

struct DistributionSpec {
  DistributionKind kind = DistributionKind::UniformInt;
  int low = 0, high = 0;              // UniformInt
  double shape = 0.0, scale = 0.0;    // Weibull k, lambda
  int item = 0, b_threshold = 0;      // Adversarial
  std::vector<int> sizes;             // Explicit
  int capacity = 0;
  int n_items = 0;

  static DistributionSpec uniform(int low, int high, int capacity, int n_items);
  static DistributionSpec weibull(double shape, double scale, int capacity, int n_items);
  static DistributionSpec adversarial(int item, int b_threshold, int capacity, int n_items);
  static DistributionSpec explicit_sizes(std::vector<int> sizes, int capacity);

  // Same distribution with a different stream length.
  DistributionSpec with_items(int n) const;
};

// "uniform(20,100)", "weibull(3,45)", "adversarial(42,24)", "explicit(5,7,9)".
std::string tag(const DistributionSpec& spec);

// Inverse of tag(). Capacity and item count come from elsewhere (flags);
// for explicit(...) n_items is the list length.
DistributionSpec parse_distribution(std::string_view text, int capacity, int n_items);

// Throws ParameterError if the invariants of the kind are violated.
void validate(const DistributionSpec& spec);

// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Per-instance stream seed: a pure function of (master_seed, instance_index).
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t instance_index);

// 64-bit Mersenne Twister (output fully specified by the standard) with
// portable, unbiased bounded-integer and unit-interval draws. The standard
// library's distributions are implementation-defined, so they are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound), bound >= 1, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound);
  // Uniform integer on [low, high].
  int uniform_int(int low, int high);
  // Uniform on [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

Instance gen_uniform(const DistributionSpec& spec, std::uint64_t seed);
// Sizes are lambda * (-ln(1 - u))^(1/k) rounded to nearest, then clamped to
// [1, capacity].
Instance gen_weibull(const DistributionSpec& spec, std::uint64_t seed);
Instance gen_adversarial(const DistributionSpec& spec);
Instance gen_explicit(const DistributionSpec& spec);

// Dispatches on spec.kind; the seed is ignored by deterministic kinds but
// still recorded in the instance.
Instance generate(const DistributionSpec& spec, std::uint64_t seed);

// Instance i of a battery.
Instance battery_instance(const DistributionSpec& spec, std::uint64_t master_seed,
                          std::size_t index);
std::vector<Instance> gen_battery(const DistributionSpec& spec, std::size_t n_instances,
                                  std::uint64_t master_seed);

}  // namespace binlab
