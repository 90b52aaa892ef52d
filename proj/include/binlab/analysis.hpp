#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "binlab/generators.hpp"
#include "binlab/heuristic_spec.hpp"
#include "binlab/instance.hpp"

namespace binlab {

// ---------------------------------------------------------------------------
// Relative performance against BestFit
// ---------------------------------------------------------------------------

struct InstanceRatio {
  std::size_t instance_id = 0;
  std::size_t bins_used = 0;
  std::size_t bestfit_bins = 0;
  double ratio = 0.0;  // bins_used / bestfit_bins
};

struct RatioSummary {
  double mean = 0.0;       // mean of per-instance ratios
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double aggregate = 0.0;  // sum(bins_used) / sum(bestfit_bins)
};

RatioSummary summarize(std::span<const InstanceRatio> rows);

struct BatteryResult {
  DistributionSpec distribution;
  HeuristicSpec heuristic;
  std::vector<InstanceRatio> per_instance;
  RatioSummary summary;
};

// All heuristics run on the same instances (instance i seeded by
// stream_seed(master_seed, i)); BestFit is always the denominator.
std::vector<BatteryResult> run_battery(const DistributionSpec& distribution,
                                       std::span<const HeuristicSpec> heuristics,
                                       std::size_t n_instances,
                                       std::uint64_t master_seed, int jobs = 1);

// ---------------------------------------------------------------------------
// Growing-n curves
// ---------------------------------------------------------------------------

struct CurvePoint {
  int n_items = 0;
  double mean_ratio = 0.0;
  std::size_t n_instances = 0;
};

// 10, 20, ..., 100, 150, 200, ..., 500
std::vector<int> default_curve_grid();

// Each grid point uses the battery seeded by master_seed with n items, so a
// single-point curve equals run_battery on the same parameters.
std::vector<CurvePoint> growing_curve(const DistributionSpec& distribution,
                                      const HeuristicSpec& heuristic,
                                      std::span<const int> n_grid,
                                      std::size_t n_instances,
                                      std::uint64_t master_seed, int jobs = 1);

// The n at which the curve last goes from >= 1 to < 1 and stays below 1,
// linearly interpolated between grid points. Empty if there is none.
std::optional<double> crossover(std::span<const CurvePoint> curve);

// ---------------------------------------------------------------------------
// (a, b) sweeps
// ---------------------------------------------------------------------------

struct SweepCell {
  int a = 0;
  int b = 0;
  double mean_ratio = 0.0;
  std::size_t n_instances = 0;
};

struct IntRange {
  int first = 0;
  int last = 0;  // inclusive
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by (a, b)
  SweepCell best;                // lowest mean ratio; ties -> first in order
};

// Cells are (a, b) with a in a_range, b in [max(a + 1, b_range.first),
// b_range.last]. Every cell is evaluated on the same battery.
SweepResult ab_sweep(const DistributionSpec& distribution, HeuristicKind ab_kind,
                     AbVariant variant, IntRange a_range, IntRange b_range,
                     std::size_t n_instances, std::uint64_t master_seed, int jobs = 1);

// a in [0, 15], b in [10, 40].
inline constexpr IntRange kDefaultARange{0, 15};
inline constexpr IntRange kDefaultBRange{10, 40};

// ---------------------------------------------------------------------------
// Driver / shadow behaviour diff
// ---------------------------------------------------------------------------

enum class DiffCategory {
  BothNew,
  SameOld,
  DifferentOld,
  DriverNewShadowOld,
  ShadowNewDriverOld,
};
inline constexpr std::size_t kDiffCategoryCount = 5;

std::string to_string(DiffCategory category);

struct DiffEvent {
  std::size_t item_index = 0;
  int item_size = 0;
  int remaining_before = 0;  // shadow's chosen bin, before the item
  int remaining_after = 0;   // shadow's chosen bin, after the item
};

struct DiffSummary {
  std::array<std::size_t, kDiffCategoryCount> counts{};
  std::vector<DiffEvent> events;  // DriverNewShadowOld only
  std::size_t items = 0;

  std::size_t count(DiffCategory c) const { return counts[static_cast<std::size_t>(c)]; }
};

// The driver evolves the state; at every step the shadow's choice is
// computed on the driver's current state and discarded.
DiffSummary behavior_diff(const Instance& instance, const HeuristicSpec& driver,
                          const HeuristicSpec& shadow);

struct ThresholdScan {
  std::optional<int> max_remaining_after;
  std::map<int, std::size_t> histogram;  // remaining_after -> events
};

ThresholdScan threshold_scan(const DiffSummary& diff);

// ---------------------------------------------------------------------------
// Adversarial constant streams
// ---------------------------------------------------------------------------

// |{ j >= 1 : c - (j - 1) s > s + b }|
int predicted_fill(int capacity, int b, int item);

struct AdversarialReport {
  int capacity = 0, a = 0, b = 0, item = 0, n_items = 0;
  int predicted_fill = 0;
  std::vector<int> fills;     // items per opened bin, in opening order
  bool fills_match = false;   // every bin but possibly the last holds predicted_fill
  std::size_t bins_used = 0;
  double measured_ratio = 0.0;     // bins_used / ceil(n / floor(c / s))
  double lower_bound_ratio = 0.0;  // bins_used / (n s / c)
  double degradation_bound = 0.0;  // c / (c - b)
};

// Runs the faithful ab heuristic of the given kind on n copies of `item`.
AdversarialReport adversarial_check(int capacity, int a, int b, int item, int n_items,
                                    HeuristicKind ab_kind = HeuristicKind::AbFirstFit);

// ---------------------------------------------------------------------------
// c12 dead-branch audit
// ---------------------------------------------------------------------------

// Selections per c12 branch (index as in kC12TierScores).
using TierCounts = std::array<std::size_t, 11>;

TierCounts dead_branch_audit(const DistributionSpec& distribution,
                             std::size_t n_instances, std::uint64_t master_seed,
                             int jobs = 1);

// Selections whose branch score is in {0.9, 0.95, 0.97, 0.98}.
std::size_t mid_tier_selections(const TierCounts& counts);

}  // namespace binlab
