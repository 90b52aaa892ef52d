#include "binlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "binlab/errors.hpp"
#include "binlab/heuristics.hpp"
#include "binlab/packing.hpp"
#include "binlab/parallel.hpp"

namespace binlab {
namespace {

// Linear interpolation between order statistics (numpy's default).
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double ratio(std::size_t bins, std::size_t reference) {
  return static_cast<double>(bins) / static_cast<double>(reference);
}

}  // namespace

RatioSummary summarize(std::span<const InstanceRatio> rows) {
  RatioSummary s;
  if (rows.empty()) return s;
  std::vector<double> ratios;
  ratios.reserve(rows.size());
  double sum = 0.0;
  std::size_t bins = 0, reference = 0;
  for (const auto& r : rows) {
    ratios.push_back(r.ratio);
    sum += r.ratio;
    bins += r.bins_used;
    reference += r.bestfit_bins;
  }
  s.mean = sum / static_cast<double>(rows.size());
  std::sort(ratios.begin(), ratios.end());
  s.median = quantile(ratios, 0.5);
  s.q1 = quantile(ratios, 0.25);
  s.q3 = quantile(ratios, 0.75);
  s.min = ratios.front();
  s.max = ratios.back();
  s.aggregate = ratio(bins, reference);
  return s;
}

std::vector<BatteryResult> run_battery(const DistributionSpec& distribution,
                                       std::span<const HeuristicSpec> heuristics,
                                       std::size_t n_instances, std::uint64_t master_seed,
                                       int jobs) {
  validate(distribution);
  if (n_instances == 0) throw ParameterError("battery needs at least one instance");
  std::vector<PriorityFunction> priorities;
  for (const auto& h : heuristics) {
    validate(h, distribution.capacity);
    priorities.push_back(make_priority(h));
  }
  const PriorityFunction best_fit = make_priority(HeuristicSpec::plain(HeuristicKind::BestFit));

  const std::size_t nh = heuristics.size();
  std::vector<std::size_t> reference(n_instances);
  std::vector<std::size_t> bins(nh * n_instances);

  parallel_for(n_instances, jobs, [&](std::size_t i) {
    const Instance inst = battery_instance(distribution, master_seed, i);
    reference[i] = count_bins(inst, best_fit);
    for (std::size_t h = 0; h < nh; ++h) {
      if (heuristics[h].kind == HeuristicKind::BestFit) {
        bins[h * n_instances + i] = reference[i];
        continue;
      }
      try {
        bins[h * n_instances + i] = count_bins(inst, priorities[h]);
      } catch (const HeuristicEvaluationError& e) {
        throw HeuristicEvaluationError(to_string(heuristics[h]) + ", instance " +
                                       std::to_string(i) + ": " + e.what());
      }
    }
  });

  std::vector<BatteryResult> out;
  out.reserve(nh);
  for (std::size_t h = 0; h < nh; ++h) {
    BatteryResult r;
    r.distribution = distribution;
    r.heuristic = heuristics[h];
    r.per_instance.reserve(n_instances);
    for (std::size_t i = 0; i < n_instances; ++i) {
      const std::size_t b = bins[h * n_instances + i];
      r.per_instance.push_back(InstanceRatio{i, b, reference[i], ratio(b, reference[i])});
    }
    r.summary = summarize(r.per_instance);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<int> default_curve_grid() {
  std::vector<int> grid;
  for (int n = 10; n <= 100; n += 10) grid.push_back(n);
  for (int n = 150; n <= 500; n += 50) grid.push_back(n);
  return grid;
}

std::vector<CurvePoint> growing_curve(const DistributionSpec& distribution,
                                      const HeuristicSpec& heuristic,
                                      std::span<const int> n_grid, std::size_t n_instances,
                                      std::uint64_t master_seed, int jobs) {
  if (n_grid.empty()) throw ParameterError("curve grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw ParameterError("curve grid must be strictly increasing positive item counts");
    }
  }
  std::vector<CurvePoint> out;
  const HeuristicSpec one[] = {heuristic};
  for (int n : n_grid) {
    const auto battery =
        run_battery(distribution.with_items(n), one, n_instances, master_seed, jobs);
    out.push_back(CurvePoint{n, battery.front().summary.mean, n_instances});
  }
  return out;
}

std::optional<double> crossover(std::span<const CurvePoint> curve) {
  // The crossing after which the curve stays below 1.
  std::optional<double> found;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto& lo = curve[i - 1];
    const auto& hi = curve[i];
    if (lo.mean_ratio >= 1.0 && hi.mean_ratio < 1.0) {
      const double t = (lo.mean_ratio - 1.0) / (lo.mean_ratio - hi.mean_ratio);
      found = lo.n_items + t * (hi.n_items - lo.n_items);
    } else if (hi.mean_ratio >= 1.0) {
      found.reset();
    }
  }
  return found;
}

SweepResult ab_sweep(const DistributionSpec& distribution, HeuristicKind ab_kind,
                     AbVariant variant, IntRange a_range, IntRange b_range,
                     std::size_t n_instances, std::uint64_t master_seed, int jobs) {
  validate(distribution);
  if (n_instances == 0) throw ParameterError("sweep needs at least one instance");
  if (a_range.first < 0 || a_range.first > a_range.last || b_range.first > b_range.last) {
    throw ParameterError("sweep ranges must be non-empty with a >= 0");
  }
  if (b_range.last >= distribution.capacity) {
    throw ParameterError("sweep b range must stay below the capacity");
  }

  std::vector<SweepCell> cells;
  std::vector<PriorityFunction> priorities;
  for (int a = a_range.first; a <= a_range.last; ++a) {
    for (int b = std::max(a + 1, b_range.first); b <= b_range.last; ++b) {
      cells.push_back(SweepCell{a, b, 0.0, n_instances});
      priorities.push_back(make_priority(HeuristicSpec::ab(ab_kind, a, b, variant)));
    }
  }
  if (cells.empty()) throw ParameterError("sweep ranges contain no cell with a < b");

  const auto instances = gen_battery(distribution, n_instances, master_seed);
  const PriorityFunction best_fit = make_priority(HeuristicSpec::plain(HeuristicKind::BestFit));
  std::vector<std::size_t> reference(n_instances);
  parallel_for(n_instances, jobs,
               [&](std::size_t i) { reference[i] = count_bins(instances[i], best_fit); });

  std::vector<double> ratios(cells.size() * n_instances);
  parallel_for(ratios.size(), jobs, [&](std::size_t task) {
    const std::size_t c = task / n_instances;
    const std::size_t i = task % n_instances;
    ratios[task] = ratio(count_bins(instances[i], priorities[c]), reference[i]);
  });

  SweepResult result;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_instances; ++i) sum += ratios[c * n_instances + i];
    cells[c].mean_ratio = sum / static_cast<double>(n_instances);
  }
  result.best = *std::min_element(cells.begin(), cells.end(),
                                  [](const SweepCell& x, const SweepCell& y) {
                                    return x.mean_ratio < y.mean_ratio;
                                  });
  result.cells = std::move(cells);
  return result;
}

std::string to_string(DiffCategory category) {
  switch (category) {
    case DiffCategory::BothNew: return "both_new";
    case DiffCategory::SameOld: return "same_old";
    case DiffCategory::DifferentOld: return "different_old";
    case DiffCategory::DriverNewShadowOld: return "a_new_b_old";
    case DiffCategory::ShadowNewDriverOld: return "b_new_a_old";
  }
  return "unknown";
}

DiffSummary behavior_diff(const Instance& instance, const HeuristicSpec& driver,
                          const HeuristicSpec& shadow) {
  validate(instance);
  validate(driver, instance.capacity);
  validate(shadow, instance.capacity);
  const PriorityFunction drive = make_priority(driver);
  const PriorityFunction follow = make_priority(shadow);

  DiffSummary diff;
  diff.items = instance.items.size();
  PackingState state(instance.capacity, instance.items.size());
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    const int item = instance.items[i];
    const std::size_t d = choose_bin(state, item, drive);
    const std::size_t s = choose_bin(state, item, follow);
    const bool d_new = state.is_empty(d);
    const bool s_new = state.is_empty(s);

    DiffCategory category;
    if (d_new && s_new) {
      category = DiffCategory::BothNew;
    } else if (!d_new && !s_new) {
      category = d == s ? DiffCategory::SameOld : DiffCategory::DifferentOld;
    } else if (d_new) {
      category = DiffCategory::DriverNewShadowOld;
      const int before = state.remaining(s);
      diff.events.push_back(DiffEvent{i, item, before, before - item});
    } else {
      category = DiffCategory::ShadowNewDriverOld;
    }
    ++diff.counts[static_cast<std::size_t>(category)];
    state.commit(d, item);
  }
  return diff;
}

ThresholdScan threshold_scan(const DiffSummary& diff) {
  ThresholdScan scan;
  for (const auto& e : diff.events) {
    ++scan.histogram[e.remaining_after];
    scan.max_remaining_after = std::max(scan.max_remaining_after.value_or(e.remaining_after),
                                        e.remaining_after);
  }
  return scan;
}

int predicted_fill(int capacity, int b, int item) {
  int m = 0;
  while (capacity - m * item > item + b) ++m;
  return m;
}

AdversarialReport adversarial_check(int capacity, int a, int b, int item, int n_items,
                                    HeuristicKind ab_kind) {
  if (item < 1 || item > capacity || b < 1 || b >= capacity) {
    throw ParameterError("adversarial check requires 1 <= s <= capacity and 1 <= b < capacity");
  }
  if (a < 0 || a >= b) throw ParameterError("adversarial check requires 0 <= a < b");
  if (n_items < 1) throw ParameterError("adversarial check requires n_items >= 1");

  AdversarialReport rep;
  rep.capacity = capacity;
  rep.a = a;
  rep.b = b;
  rep.item = item;
  rep.n_items = n_items;
  rep.predicted_fill = predicted_fill(capacity, b, item);

  const Instance inst = gen_adversarial(DistributionSpec::adversarial(item, b, capacity, n_items));
  const auto run = pack_instance(inst, HeuristicSpec::ab(ab_kind, a, b, AbVariant::Faithful), true);

  std::map<std::size_t, std::size_t> slot;  // bin -> position in opening order
  for (const auto& e : *run.trace) {
    auto [it, inserted] = slot.emplace(e.chosen_bin, rep.fills.size());
    if (inserted) rep.fills.push_back(0);
    ++rep.fills[it->second];
  }
  rep.fills_match = !rep.fills.empty();
  for (std::size_t k = 0; k < rep.fills.size(); ++k) {
    const bool last = k + 1 == rep.fills.size();
    if (last ? rep.fills[k] > rep.predicted_fill : rep.fills[k] != rep.predicted_fill) {
      rep.fills_match = false;
    }
  }

  rep.bins_used = run.bins_used;
  const int per_bin_optimum = capacity / item;
  const auto optimum = static_cast<std::size_t>((n_items + per_bin_optimum - 1) / per_bin_optimum);
  rep.measured_ratio = ratio(rep.bins_used, optimum);
  rep.lower_bound_ratio = static_cast<double>(rep.bins_used) * capacity /
                          (static_cast<double>(n_items) * item);
  rep.degradation_bound = static_cast<double>(capacity) / (capacity - b);
  return rep;
}

TierCounts dead_branch_audit(const DistributionSpec& distribution, std::size_t n_instances,
                             std::uint64_t master_seed, int jobs) {
  validate(distribution);
  std::vector<TierCounts> per_instance(n_instances);
  const auto c12 = HeuristicSpec::plain(HeuristicKind::C12);
  parallel_for(n_instances, jobs, [&](std::size_t i) {
    const auto run = pack_instance(battery_instance(distribution, master_seed, i), c12, true);
    TierCounts counts{};
    for (const auto& e : *run.trace) ++counts[c12_tier(e.remaining_before - e.item_size)];
    per_instance[i] = counts;
  });
  TierCounts total{};
  for (const auto& counts : per_instance) {
    for (std::size_t t = 0; t < total.size(); ++t) total[t] += counts[t];
  }
  return total;
}

std::size_t mid_tier_selections(const TierCounts& counts) {
  std::size_t n = 0;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    const double score = kC12TierScores[t];
    if (score == 0.9 || score == 0.95 || score == 0.97 || score == 0.98) n += counts[t];
  }
  return n;
}

}  // namespace binlab
