#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "binlab/heuristic_spec.hpp"
#include "binlab/instance.hpp"

namespace binlab {

// Writes one score per candidate into `scores`. `remaining` holds the
// remaining capacities of the feasible candidates in pool-index order.
using ScoreFn = std::function<void(int item, std::span<const int> remaining,
                                   int capacity, std::span<double> scores)>;

struct PriorityFunction {
  std::string name;
  ScoreFn score;
  // True when a bin's score depends only on (item, its remaining, capacity).
  // Such functions may be evaluated on one representative per distinct
  // remaining value; c14 is the exception (neighbour-dependent).
  bool per_bin = true;
};

struct TraceEvent {
  std::size_t item_index = 0;
  int item_size = 0;
  std::size_t chosen_bin = 0;
  bool was_empty = false;
  int remaining_before = 0;
  int remaining_after = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Fixed-order pool of bins, one slot per item, all starting at capacity.
//
// Besides the remaining-capacity vector the state keeps an index of
// non-empty bins grouped by remaining capacity, so that per-bin priority
// functions can be evaluated on one representative (the lowest index) per
// distinct remaining value instead of on the whole pool.
class PackingState {
 public:
  PackingState(int capacity, std::size_t pool_size);

  int capacity() const { return capacity_; }
  std::size_t size() const { return remaining_.size(); }
  std::span<const int> remaining() const { return remaining_; }
  int remaining(std::size_t bin) const { return remaining_[bin]; }
  bool is_empty(std::size_t bin) const { return remaining_[bin] == capacity_; }

  std::size_t bins_used() const { return bins_used_; }
  std::size_t used_capacity() const { return used_capacity_; }
  // One past the highest bin index that has received an item.
  std::size_t high_water() const { return high_water_; }
  // Lowest empty bin index, or size() if the pool is exhausted.
  std::size_t first_empty() const { return first_empty_; }

  // Decrements bin's remaining capacity by item. Throws
  // HarnessExhaustedError if the item does not fit.
  void commit(std::size_t bin, int item);

  // Lowest index among non-empty bins whose remaining capacity is exactly
  // r, if any.
  std::optional<std::size_t> lowest_bin_with(int r) const;
  std::size_t count_with(int r) const { return bucket_count_[static_cast<std::size_t>(r)]; }

 private:
  int capacity_;
  std::vector<int> remaining_;
  std::size_t bins_used_ = 0;
  std::size_t used_capacity_ = 0;
  std::size_t high_water_ = 0;
  std::size_t first_empty_ = 0;

  // Non-empty bins per remaining value r in [0, capacity). Each heap is a
  // min-heap of bin indices with lazy deletion: an entry is live iff the
  // bin's remaining still equals r. A bin enters bucket r at most once
  // because remaining capacities only decrease.
  std::vector<std::size_t> bucket_count_;
  mutable std::vector<std::vector<std::size_t>> bucket_heap_;
};

// Indices i with remaining[i] >= item, ascending. Throws
// HarnessExhaustedError if there are none.
std::vector<std::size_t> feasible_candidates(const PackingState& state, int item);

// Literal harness: evaluates the priority function over every feasible
// candidate and returns the first index of the maximal score.
std::size_t choose_bin_exhaustive(const PackingState& state, int item,
                                  const PriorityFunction& priority);

// Same decision as choose_bin_exhaustive, computed on a reduced candidate
// set. Untouched bins beyond high_water() are represented by the first two
// of them (all later ones score identically to the second, even for c14);
// per-bin functions are evaluated on one bin per distinct remaining value.
std::size_t choose_bin(const PackingState& state, int item,
                       const PriorityFunction& priority);

std::size_t place_item(PackingState& state, int item,
                       const PriorityFunction& priority,
                       std::vector<TraceEvent>* trace = nullptr);

struct RunResult {
  HeuristicSpec heuristic;
  std::string instance_id;
  std::size_t bins_used = 0;
  std::optional<std::vector<TraceEvent>> trace;
  std::size_t lower_bound = 0;
};

// ceil(sum(items) / capacity)
std::size_t lower_bound(const Instance& instance);

RunResult pack_instance(const Instance& instance, const HeuristicSpec& heuristic,
                        bool want_trace = false, std::string instance_id = {});

// Bins used only; skips RunResult bookkeeping. Used by batteries and sweeps.
std::size_t count_bins(const Instance& instance, const PriorityFunction& priority);

// CSV with header item_index,item_size,chosen_bin,was_empty,remaining_before,remaining_after
void write_trace_csv(std::ostream& out, std::span<const TraceEvent> trace);

}  // namespace binlab
