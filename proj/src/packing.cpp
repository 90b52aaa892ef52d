#include "binlab/packing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>

#include "binlab/csv.hpp"
#include "binlab/errors.hpp"
#include "binlab/heuristics.hpp"

namespace binlab {

void validate(const Instance& instance) {
  if (instance.capacity < 1) throw ParameterError("capacity must be positive");
  if (instance.items.empty()) throw ParameterError("instance has no items");
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    const int s = instance.items[i];
    if (s < 1 || s > instance.capacity) {
      throw ParameterError("item " + std::to_string(i) + " has size " + std::to_string(s) +
                           " outside [1, " + std::to_string(instance.capacity) + "]");
    }
  }
}

PackingState::PackingState(int capacity, std::size_t pool_size)
    : capacity_(capacity),
      remaining_(pool_size, capacity),
      bucket_count_(static_cast<std::size_t>(std::max(capacity, 0)), 0),
      bucket_heap_(static_cast<std::size_t>(std::max(capacity, 0))) {
  if (capacity < 1) throw ParameterError("capacity must be positive");
}

void PackingState::commit(std::size_t bin, int item) {
  if (bin >= remaining_.size() || item < 1 || remaining_[bin] < item) {
    throw HarnessExhaustedError("infeasible placement of item " + std::to_string(item) +
                                " into bin " + std::to_string(bin));
  }
  const int before = remaining_[bin];
  const int after = before - item;
  remaining_[bin] = after;
  used_capacity_ += static_cast<std::size_t>(item);

  if (before == capacity_) {
    ++bins_used_;
    high_water_ = std::max(high_water_, bin + 1);
    while (first_empty_ < remaining_.size() && remaining_[first_empty_] != capacity_) {
      ++first_empty_;
    }
  } else {
    --bucket_count_[static_cast<std::size_t>(before)];
  }
  ++bucket_count_[static_cast<std::size_t>(after)];
  auto& heap = bucket_heap_[static_cast<std::size_t>(after)];
  heap.push_back(bin);
  std::push_heap(heap.begin(), heap.end(), std::greater<>{});
}

std::optional<std::size_t> PackingState::lowest_bin_with(int r) const {
  if (r < 0 || r >= capacity_ || bucket_count_[static_cast<std::size_t>(r)] == 0) {
    return std::nullopt;
  }
  auto& heap = bucket_heap_[static_cast<std::size_t>(r)];
  while (remaining_[heap.front()] != r) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
    heap.pop_back();
  }
  return heap.front();
}

std::vector<std::size_t> feasible_candidates(const PackingState& state, int item) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.remaining(i) >= item) out.push_back(i);
  }
  if (out.empty()) {
    throw HarnessExhaustedError("no feasible bin for item of size " + std::to_string(item));
  }
  return out;
}

namespace {

struct Scratch {
  std::vector<std::size_t> bins;
  std::vector<int> remaining;
  std::vector<double> scores;

  void clear() {
    bins.clear();
    remaining.clear();
  }
  void add(std::size_t bin, int r) {
    bins.push_back(bin);
    remaining.push_back(r);
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void score_candidates(const PriorityFunction& priority, int item, int capacity,
                      Scratch& s) {
  s.scores.resize(s.remaining.size());
  priority.score(item, s.remaining, capacity, s.scores);
  for (std::size_t i = 0; i < s.scores.size(); ++i) {
    if (!std::isfinite(s.scores[i])) {
      throw HeuristicEvaluationError(
          "heuristic " + priority.name + " produced a non-finite score for item " +
          std::to_string(item) + " and bin remaining " + std::to_string(s.remaining[i]) +
          " (capacity " + std::to_string(capacity) + ")");
    }
  }
}

// Maximal score; ties go to the lowest pool index.
std::size_t select(const Scratch& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.scores.size(); ++i) {
    if (s.scores[i] > s.scores[best] ||
        (s.scores[i] == s.scores[best] && s.bins[i] < s.bins[best])) {
      best = i;
    }
  }
  return s.bins[best];
}

}  // namespace

std::size_t choose_bin_exhaustive(const PackingState& state, int item,
                                  const PriorityFunction& priority) {
  Scratch s;
  for (std::size_t bin : feasible_candidates(state, item)) s.add(bin, state.remaining(bin));
  score_candidates(priority, item, state.capacity(), s);
  return select(s);
}

std::size_t choose_bin(const PackingState& state, int item,
                       const PriorityFunction& priority) {
  Scratch& s = scratch();
  s.clear();
  const int capacity = state.capacity();

  if (priority.per_bin) {
    for (int r = std::max(item, 0); r < capacity; ++r) {
      if (state.count_with(r) == 0) continue;
      s.add(*state.lowest_bin_with(r), r);
    }
    if (state.first_empty() < state.size()) s.add(state.first_empty(), capacity);
  } else {
    const auto rem = state.remaining();
    for (std::size_t i = 0; i < state.high_water(); ++i) {
      if (rem[i] >= item) s.add(i, rem[i]);
    }
    for (std::size_t i = state.high_water(); i < std::min(state.size(), state.high_water() + 2);
         ++i) {
      s.add(i, capacity);
    }
  }

  if (s.bins.empty()) {
    throw HarnessExhaustedError("no feasible bin for item of size " + std::to_string(item));
  }
  score_candidates(priority, item, capacity, s);
  return select(s);
}

std::size_t place_item(PackingState& state, int item, const PriorityFunction& priority,
                       std::vector<TraceEvent>* trace) {
  if (item < 1 || item > state.capacity()) {
    throw ParameterError("item size " + std::to_string(item) + " outside [1, " +
                         std::to_string(state.capacity()) + "]");
  }
  const std::size_t bin = choose_bin(state, item, priority);
  const int before = state.remaining(bin);
  state.commit(bin, item);
  if (trace) {
    trace->push_back(TraceEvent{trace->size(), item, bin, before == state.capacity(), before,
                                before - item});
  }
  return bin;
}

std::size_t lower_bound(const Instance& instance) {
  const auto total = std::accumulate(instance.items.begin(), instance.items.end(),
                                     std::size_t{0});
  const auto cap = static_cast<std::size_t>(instance.capacity);
  return (total + cap - 1) / cap;
}

namespace {

std::size_t run(const Instance& instance, const PriorityFunction& priority,
                std::vector<TraceEvent>* trace) {
  PackingState state(instance.capacity, instance.items.size());
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    try {
      place_item(state, instance.items[i], priority, trace);
    } catch (const HeuristicEvaluationError& e) {
      throw HeuristicEvaluationError(std::string(e.what()) + " at item index " +
                                     std::to_string(i));
    }
  }
  return state.bins_used();
}

}  // namespace

RunResult pack_instance(const Instance& instance, const HeuristicSpec& heuristic,
                        bool want_trace, std::string instance_id) {
  validate(instance);
  validate(heuristic, instance.capacity);
  const PriorityFunction priority = make_priority(heuristic);

  RunResult result;
  result.heuristic = heuristic;
  result.instance_id = std::move(instance_id);
  result.lower_bound = lower_bound(instance);
  if (want_trace) {
    result.trace.emplace();
    result.trace->reserve(instance.items.size());
  }
  result.bins_used = run(instance, priority, want_trace ? &*result.trace : nullptr);
  return result;
}

std::size_t count_bins(const Instance& instance, const PriorityFunction& priority) {
  return run(instance, priority, nullptr);
}

void write_trace_csv(std::ostream& out, std::span<const TraceEvent> trace) {
  CsvWriter csv(out);
  csv.field("item_index").field("item_size").field("chosen_bin").field("was_empty")
      .field("remaining_before").field("remaining_after");
  csv.end_row();
  for (const auto& e : trace) {
    csv.field(static_cast<unsigned long long>(e.item_index)).field(e.item_size)
        .field(static_cast<unsigned long long>(e.chosen_bin)).field(e.was_empty)
        .field(e.remaining_before).field(e.remaining_after);
    csv.end_row();
  }
}

}  // namespace binlab
