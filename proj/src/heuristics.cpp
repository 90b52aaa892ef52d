#include "binlab/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "binlab/errors.hpp"

namespace binlab {

void first_fit_scores(int, std::span<const int>, int, std::span<double> scores) {
  std::fill(scores.begin(), scores.end(), 1.0);
}

void best_fit_scores(int item, std::span<const int> remaining, int,
                     std::span<double> scores) {
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    scores[i] = -static_cast<double>(remaining[i] - item);
  }
}

void worst_fit_scores(int item, std::span<const int> remaining, int capacity,
                      std::span<double> scores) {
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    scores[i] = remaining[i] < capacity ? static_cast<double>(remaining[i] - item) : -1.0;
  }
}

int c12_tier(int gap) {
  if (gap <= 2) return 0;
  if (gap <= 3) return 1;
  if (gap <= 5) return 2;
  if (gap <= 7) return 3;
  if (gap <= 9) return 4;
  if (gap <= 12) return 5;
  if (gap <= 15) return 6;
  if (gap <= 18) return 7;
  if (gap <= 20) return 8;
  if (gap <= 21) return 9;
  return 10;
}

double c12_score(int gap) { return kC12TierScores[c12_tier(gap)]; }

void c12_scores(int item, std::span<const int> remaining, int, std::span<double> scores) {
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    scores[i] = c12_score(remaining[i] - item);
  }
}

void c14_scores(int item, std::span<const int> remaining, int, std::span<double> scores) {
  if (remaining.empty()) return;
  const int top = *std::max_element(remaining.begin(), remaining.end());
  const double s = item;
  const double s2 = s * s;
  const double s3 = s2 * s;
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    const double r = remaining[i];
    const double d = remaining[i] - top;
    double score = d * d / s + r * r / s2 + r * r / s3;
    if (remaining[i] > item) score = -score;
    scores[i] = score;
  }
  // score[1:] -= score[:-1] reads the pre-update values; walk backwards.
  for (std::size_t i = remaining.size() - 1; i > 0; --i) scores[i] -= scores[i - 1];
}

void eoh_scores(int item, std::span<const int> remaining, int, std::span<double> scores) {
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    const double bin = remaining[i];
    const double diff = remaining[i] - item;
    const double ex = std::exp(diff);
    const double root = std::sqrt(diff);
    const double ulti = 1.0 - diff / bin;
    const double comb = ulti * root;
    const double adjust = diff > item * 3 ? comb + 0.8 : comb + 0.3;
    const double hybrid_exp = bin / ((ex + 0.7) * ex);
    scores[i] = hybrid_exp + adjust;
  }
}

namespace {

double verbatim_loose(HeuristicKind baseline, int gap) {
  switch (baseline) {
    case HeuristicKind::AbBestFit: return 1.0 / gap;
    case HeuristicKind::AbWorstFit: return -1.0 / gap;
    default: return 1.0;
  }
}

double faithful_loose(HeuristicKind baseline, int gap) {
  // gap > b >= 1, so every value lies in (0, 1].
  switch (baseline) {
    case HeuristicKind::AbBestFit: return 1.0 / gap;
    case HeuristicKind::AbWorstFit: return 1.0 - 1.0 / gap;
    default: return 1.0;
  }
}

}  // namespace

void ab_scores(int item, std::span<const int> remaining, int capacity, int a, int b,
               HeuristicKind baseline, AbVariant variant, std::span<double> scores) {
  const double cap = capacity;
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    const int r = remaining[i];
    const int gap = r - item;
    if (r <= item + a) {
      scores[i] = cap - r;
    } else if (variant == AbVariant::Verbatim) {
      scores[i] = r <= item + b ? 0.0 : verbatim_loose(baseline, gap);
    } else if (r == capacity) {
      scores[i] = -cap;
    } else if (r <= item + b) {
      scores[i] = -2.0 * cap;
    } else {
      scores[i] = faithful_loose(baseline, gap);
    }
  }
}

std::vector<double> evaluate(const PriorityFunction& priority, int item,
                             std::span<const int> remaining, int capacity) {
  std::vector<double> scores(remaining.size());
  priority.score(item, remaining, capacity, scores);
  return scores;
}

PriorityFunction make_priority(const HeuristicSpec& spec) {
  PriorityFunction fn;
  fn.name = to_string(spec);
  switch (spec.kind) {
    case HeuristicKind::FirstFit: fn.score = first_fit_scores; break;
    case HeuristicKind::BestFit: fn.score = best_fit_scores; break;
    case HeuristicKind::WorstFit: fn.score = worst_fit_scores; break;
    case HeuristicKind::C12: fn.score = c12_scores; break;
    case HeuristicKind::C14:
      fn.score = c14_scores;
      fn.per_bin = false;
      break;
    case HeuristicKind::EoH: fn.score = eoh_scores; break;
    case HeuristicKind::SmoothC12:
      fn.score = [](int item, std::span<const int> remaining, int capacity,
                    std::span<double> scores) {
        ab_scores(item, remaining, capacity, kSmoothC12A, kSmoothC12B,
                  HeuristicKind::AbFirstFit, AbVariant::Faithful, scores);
      };
      break;
    case HeuristicKind::AbFirstFit:
    case HeuristicKind::AbBestFit:
    case HeuristicKind::AbWorstFit: {
      if (!spec.a || !spec.b) throw ParameterError(fn.name + " requires a and b");
      const int a = *spec.a, b = *spec.b;
      if (a < 0 || a >= b) {
        throw ParameterError("ab thresholds require 0 <= a < b (got a=" +
                             std::to_string(a) + ", b=" + std::to_string(b) + ")");
      }
      fn.score = [a, b, kind = spec.kind, variant = spec.variant](
                     int item, std::span<const int> remaining, int capacity,
                     std::span<double> scores) {
        ab_scores(item, remaining, capacity, a, b, kind, variant, scores);
      };
      break;
    }
  }
  return fn;
}

}  // namespace binlab
