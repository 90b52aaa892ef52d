#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "binlab/errors.hpp"
#include "binlab/generators.hpp"
#include "binlab/heuristics.hpp"
#include "binlab/packing.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace binlab;
using testutil::state_with;

namespace {

const std::vector<HeuristicSpec>& all_heuristics() {
  static const std::vector<HeuristicSpec> hs = {
      HeuristicSpec::plain(HeuristicKind::FirstFit),
      HeuristicSpec::plain(HeuristicKind::BestFit),
      HeuristicSpec::plain(HeuristicKind::WorstFit),
      HeuristicSpec::plain(HeuristicKind::C12),
      HeuristicSpec::plain(HeuristicKind::SmoothC12),
      HeuristicSpec::plain(HeuristicKind::C14),
      HeuristicSpec::plain(HeuristicKind::EoH),
      HeuristicSpec::ab(HeuristicKind::AbFirstFit, 5, 24),
      HeuristicSpec::ab(HeuristicKind::AbBestFit, 3, 20),
      HeuristicSpec::ab(HeuristicKind::AbWorstFit, 1, 21),
      HeuristicSpec::ab(HeuristicKind::AbFirstFit, 5, 24, AbVariant::Verbatim),
      HeuristicSpec::ab(HeuristicKind::AbBestFit, 3, 20, AbVariant::Verbatim),
      HeuristicSpec::ab(HeuristicKind::AbWorstFit, 1, 21, AbVariant::Verbatim),
  };
  return hs;
}

std::vector<Instance> sample_instances() {
  return {
      battery_instance(DistributionSpec::uniform(20, 100, 150, 400), 11, 0),
      battery_instance(DistributionSpec::uniform(20, 100, 150, 400), 11, 1),
      battery_instance(DistributionSpec::weibull(3, 45, 100, 400), 12, 0),
      battery_instance(DistributionSpec::uniform(1, 60, 60, 300), 13, 0),
  };
}

}  // namespace

TEST_CASE("feasible candidates filter by remaining >= item in index order") {
  CHECK(feasible_candidates(state_with(150, {150, 150}), 100) == std::vector<std::size_t>{0, 1});
  CHECK(feasible_candidates(state_with(150, {30, 150, 70}), 50) == std::vector<std::size_t>{1, 2});
  CHECK(feasible_candidates(state_with(150, {50, 150}), 50) == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(feasible_candidates(state_with(150, {30, 40}), 50), HarnessExhaustedError);
}

TEST_CASE("place_item examples") {
  SUBCASE("best fit takes the perfect fit") {
    auto st = state_with(150, {30, 50, 150});
    CHECK(place_item(st, 30, make_priority(HeuristicSpec::plain(HeuristicKind::BestFit))) == 0);
    CHECK(st.remaining(0) == 0);
  }
  SUBCASE("first fit breaks ties by lowest index") {
    auto st = state_with(150, {150, 150, 150});
    CHECK(place_item(st, 40, make_priority(HeuristicSpec::plain(HeuristicKind::FirstFit))) == 0);
  }
  SUBCASE("c14 on [60, 50]") {
    auto st = state_with(100, {60, 50});
    CHECK(place_item(st, 50, make_priority(HeuristicSpec::plain(HeuristicKind::C14))) == 1);
  }
  SUBCASE("trace event fields") {
    auto st = state_with(150, {100, 150});
    std::vector<TraceEvent> trace;
    place_item(st, 40, make_priority(HeuristicSpec::plain(HeuristicKind::FirstFit)), &trace);
    place_item(st, 90, make_priority(HeuristicSpec::plain(HeuristicKind::FirstFit)), &trace);
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].chosen_bin == 0);
    CHECK_FALSE(trace[0].was_empty);
    CHECK(trace[0].remaining_before == 100);
    CHECK(trace[0].remaining_after == 60);
    CHECK(trace[1].chosen_bin == 1);
    CHECK(trace[1].was_empty);
    CHECK(trace[1].item_index == 1);
  }
}

TEST_CASE("pack_instance examples") {
  const auto bf = HeuristicSpec::plain(HeuristicKind::BestFit);
  const auto ff = HeuristicSpec::plain(HeuristicKind::FirstFit);
  for (const auto& h : all_heuristics()) {
    CHECK(pack_instance(Instance{150, {100}, "", 0}, h).bins_used == 1);
  }
  CHECK(pack_instance(Instance{150, {100, 100, 100}, "", 0}, bf).bins_used == 3);

  const Instance four{150, {60, 60, 60, 60}, "", 0};
  const auto run = pack_instance(four, ff, true);
  CHECK(run.bins_used == 2);
  const auto brute = oracle::greedy(150, four.items, oracle::per_bin([](int, int, int) { return 1.0; }));
  CHECK(brute.bins_used == 2);
  CHECK(brute.choices == std::vector<std::size_t>{0, 0, 1, 1});
  REQUIRE(run.trace);
  CHECK(run.trace->back().remaining_after == 30);
}

TEST_CASE("lower bound") {
  CHECK(lower_bound(Instance{150, {100}, "", 0}) == 1);
  CHECK(lower_bound(Instance{100, {50, 50, 50}, "", 0}) == 2);
  CHECK(lower_bound(Instance{150, {60, 60, 60, 60}, "", 0}) == 2);
}

TEST_CASE("invalid instances are rejected") {
  const auto bf = HeuristicSpec::plain(HeuristicKind::BestFit);
  CHECK_THROWS_AS(pack_instance(Instance{150, {}, "", 0}, bf), ParameterError);
  CHECK_THROWS_AS(pack_instance(Instance{150, {151}, "", 0}, bf), ParameterError);
  CHECK_THROWS_AS(pack_instance(Instance{150, {0}, "", 0}, bf), ParameterError);
  CHECK_THROWS_AS(pack_instance(Instance{0, {1}, "", 0}, bf), ParameterError);
}

TEST_CASE("non-finite scores are errors naming the heuristic and item") {
  PriorityFunction nan_fn{"nan-heuristic",
                          [](int, std::span<const int>, int, std::span<double> out) {
                            for (auto& v : out) v = std::numeric_limits<double>::quiet_NaN();
                          },
                          true};
  auto st = state_with(100, {100, 100});
  try {
    place_item(st, 10, nan_fn);
    FAIL("expected HeuristicEvaluationError");
  } catch (const HeuristicEvaluationError& e) {
    CHECK(std::string(e.what()).find("nan-heuristic") != std::string::npos);
  }
}

TEST_CASE("fast selection matches the literal harness for every heuristic") {
  for (const auto& inst : sample_instances()) {
    for (const auto& h : all_heuristics()) {
      if (h.is_ab()) {
        try {
          validate(h, inst.capacity);
        } catch (const ParameterError&) {
          continue;
        }
      }
      CAPTURE(to_string(h));
      CAPTURE(inst.meta);
      const auto pf = make_priority(h);
      PackingState fast(inst.capacity, inst.items.size());
      PackingState slow(inst.capacity, inst.items.size());
      for (std::size_t i = 0; i < inst.items.size(); ++i) {
        const int s = inst.items[i];
        const auto a = choose_bin(fast, s, pf);
        const auto b = choose_bin_exhaustive(slow, s, pf);
        REQUIRE(a == b);
        fast.commit(a, s);
        slow.commit(b, s);
      }
    }
  }
}

TEST_CASE("pack_instance agrees with an independent brute-force greedy") {
  struct Case {
    HeuristicSpec spec;
    oracle::VectorScore score;
  };
  const std::vector<Case> cases = {
      {HeuristicSpec::plain(HeuristicKind::FirstFit),
       oracle::per_bin([](int, int, int) { return 0.0; })},
      {HeuristicSpec::plain(HeuristicKind::BestFit),
       oracle::per_bin([](int s, int r, int) { return -double(r - s); })},
      {HeuristicSpec::plain(HeuristicKind::C12),
       oracle::per_bin([](int s, int r, int) { return oracle::c12(s, r); })},
      {HeuristicSpec::plain(HeuristicKind::EoH),
       oracle::per_bin([](int s, int r, int) { return oracle::eoh_listing(s, r); })},
      {HeuristicSpec::plain(HeuristicKind::C14),
       [](int s, const std::vector<int>& r, int) { return oracle::c14(s, r); }},
      {HeuristicSpec::ab(HeuristicKind::AbFirstFit, 5, 24, AbVariant::Verbatim),
       oracle::per_bin([](int s, int r, int c) {
         return oracle::ab_verbatim(s, r, c, 5, 24, oracle::Base::FF);
       })},
      {HeuristicSpec::ab(HeuristicKind::AbWorstFit, 1, 21, AbVariant::Verbatim),
       oracle::per_bin([](int s, int r, int c) {
         return oracle::ab_verbatim(s, r, c, 1, 21, oracle::Base::WF);
       })},
  };
  for (const auto& inst : sample_instances()) {
    for (const auto& c : cases) {
      CAPTURE(to_string(c.spec));
      const auto run = pack_instance(inst, c.spec, true);
      const auto ref = oracle::greedy(inst.capacity, inst.items, c.score);
      CHECK(run.bins_used == ref.bins_used);
      std::vector<std::size_t> chosen;
      for (const auto& e : *run.trace) chosen.push_back(e.chosen_bin);
      CHECK(chosen == ref.choices);
    }
  }
}

TEST_CASE("harness invariants on random instances") {
  for (const auto& inst : sample_instances()) {
    const long total = std::accumulate(inst.items.begin(), inst.items.end(), 0L);
    for (const auto& h : all_heuristics()) {
      if (h.is_ab() && *h.b >= inst.capacity) continue;
      CAPTURE(to_string(h));
      const auto pf = make_priority(h);
      PackingState st(inst.capacity, inst.items.size());
      std::vector<TraceEvent> trace;
      std::vector<int> before(st.remaining().begin(), st.remaining().end());
      for (int s : inst.items) {
        const auto feasible = feasible_candidates(st, s);
        const auto bin = place_item(st, s, pf, &trace);
        CHECK(std::find(feasible.begin(), feasible.end(), bin) != feasible.end());
        for (std::size_t i = 0; i < st.size(); ++i) REQUIRE(st.remaining(i) <= before[i]);
        before.assign(st.remaining().begin(), st.remaining().end());
      }
      long used = 0;
      std::size_t touched = 0;
      for (int r : st.remaining()) {
        used += inst.capacity - r;
        touched += r < inst.capacity ? 1 : 0;
      }
      CHECK(used == total);
      CHECK(st.used_capacity() == static_cast<std::size_t>(total));
      CHECK(st.bins_used() == touched);
      for (const auto& e : trace) {
        CHECK(e.remaining_after == e.remaining_before - e.item_size);
        CHECK(e.remaining_after >= 0);
        CHECK(e.was_empty == (e.remaining_before == inst.capacity));
      }
      const auto run = pack_instance(inst, h);
      CHECK(run.bins_used == st.bins_used());
      CHECK(run.lower_bound <= run.bins_used);
      CHECK(run.bins_used <= inst.items.size());
    }
  }
}

TEST_CASE("determinism: identical traces on repeated runs") {
  const auto inst = sample_instances()[2];
  for (const auto& h : all_heuristics()) {
    const auto a = pack_instance(inst, h, true);
    const auto b = pack_instance(inst, h, true);
    CHECK(*a.trace == *b.trace);
    std::ostringstream sa, sb;
    write_trace_csv(sa, *a.trace);
    write_trace_csv(sb, *b.trace);
    CHECK(sa.str() == sb.str());
  }
}

TEST_CASE("tie-break law: equal maximal scores select the lower index") {
  // Equal remaining values score equally under every per-bin heuristic.
  for (const auto& h : all_heuristics()) {
    if (!make_priority(h).per_bin) continue;
    CAPTURE(to_string(h));
    auto st = state_with(150, {90, 90, 90, 150});
    const auto pick = choose_bin(st, 30, make_priority(h));
    CHECK((pick == 0 || pick == 3));
  }
  PriorityFunction flat{"flat", [](int, std::span<const int>, int, std::span<double> out) {
                          for (auto& v : out) v = 7.0;
                        }};
  auto st = state_with(150, {10, 120, 80, 150});
  CHECK(choose_bin(st, 50, flat) == 1);
  CHECK(choose_bin_exhaustive(st, 50, flat) == 1);
}

TEST_CASE("BestFit never beats the lower bound") {
  for (std::size_t i = 0; i < 20; ++i) {
    const auto inst = battery_instance(DistributionSpec::uniform(20, 100, 150, 200), 3, i);
    CHECK(pack_instance(inst, HeuristicSpec::plain(HeuristicKind::BestFit)).bins_used >=
          lower_bound(inst));
  }
}

TEST_CASE("trace CSV header") {
  std::ostringstream out;
  std::vector<TraceEvent> trace{{0, 40, 0, true, 150, 110}};
  write_trace_csv(out, trace);
  CHECK(out.str() ==
        "item_index,item_size,chosen_bin,was_empty,remaining_before,remaining_after\n"
        "0,40,0,true,150,110\n");
}
