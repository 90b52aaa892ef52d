#pragma once

#include <span>
#include <vector>

#include "binlab/heuristic_spec.hpp"
#include "binlab/packing.hpp"

namespace binlab {

// Priority functions. Each writes one score per candidate into `scores`
// (same length as `remaining`); the harness picks the first maximum.

// Constant score: with lowest-index tie-breaking this is the first feasible bin.
void first_fit_scores(int item, std::span<const int> remaining, int capacity,
                      std::span<double> scores);

// -(remaining - item): the fullest feasible bin wins.
void best_fit_scores(int item, std::span<const int> remaining, int capacity,
                     std::span<double> scores);

// remaining - item for bins that already hold an item, -1 for empty bins.
// The emptiest open bin wins; a new bin is opened only when no open bin fits.
void worst_fit_scores(int item, std::span<const int> remaining, int capacity,
                      std::span<double> scores);

// Eleven-tier table on the gap remaining - item.
void c12_scores(int item, std::span<const int> remaining, int capacity,
                std::span<double> scores);

// score = (r - max(r))^2/s + r^2/s^2 + r^2/s^3, negated where r > s, then
// each entry minus its predecessor's (pre-update) value. `max` is taken over
// the candidate vector, not the capacity.
void c14_scores(int item, std::span<const int> remaining, int capacity,
                std::span<double> scores);

// With d = r - s: r / ((e^d + 0.7) e^d) + (1 - d/r) sqrt(d) + (0.8 if d > 3s else 0.3).
void eoh_scores(int item, std::span<const int> remaining, int capacity,
                std::span<double> scores);

// Two-threshold family. Bands on the bin's remaining r for item s:
//   tight  r <= s + a
//   mid    s + a < r <= s + b
//   loose  r > s + b
//
// Verbatim: tight -> capacity - r, mid -> 0, loose -> 1 (ff), 1/(r-s) (bf),
// -1/(r-s) (wf).
//
// Faithful: tight -> capacity - r; open loose bins -> baseline mapped into
// (0, 1] (ff: 1, bf: 1/(r-s), wf: 1 - 1/(r-s)); empty bins -> -capacity;
// open mid-band bins -> -2 * capacity.
void ab_scores(int item, std::span<const int> remaining, int capacity, int a,
               int b, HeuristicKind baseline, AbVariant variant,
               std::span<double> scores);

// Smooth c12: faithful ab-FirstFit with a = 7, b = 21.
inline constexpr int kSmoothC12A = 7;
inline constexpr int kSmoothC12B = 21;

// Score tiers of c12, indexed by tier: gap <= 2, 3, 5, 7, 9, 12, 15, 18, 20,
// 21, and the final branch.
inline constexpr double kC12TierScores[11] = {4,    3,    2,    1,    0.9, 0.95,
                                              0.97, 0.98, 0.98, 0.98, 0.99};
// Index into kC12TierScores of the branch taken for a given gap.
int c12_tier(int gap);
double c12_score(int gap);

// Convenience wrapper returning a fresh vector.
std::vector<double> evaluate(const PriorityFunction& priority, int item,
                             std::span<const int> remaining, int capacity);

// Throws ParameterError on invalid ab thresholds (a >= b or negative).
PriorityFunction make_priority(const HeuristicSpec& spec);

}  // namespace binlab
