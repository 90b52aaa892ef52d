#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "binlab/analysis.hpp"
#include "binlab/errors.hpp"
#include "binlab/generators.hpp"
#include "binlab/heuristics.hpp"
#include "binlab/packing.hpp"
#include "oracles.hpp"

using namespace binlab;

namespace {

// Groups the integer support [lo, hi] into consecutive runs of roughly
// equal probability and checks every run's count against n p within 5
// standard deviations.
void check_deciles(const std::vector<int>& sample, int lo, int hi,
                   const std::function<double(int)>& pmf) {
  std::vector<long> counts(hi + 1, 0);
  for (int x : sample) {
    REQUIRE(x >= lo);
    REQUIRE(x <= hi);
    ++counts[x];
  }
  const double n = static_cast<double>(sample.size());
  double p = 0;
  long c = 0;
  int groups = 0;
  for (int k = lo; k <= hi; ++k) {
    p += pmf(k);
    c += counts[k];
    if (p >= 0.1 || k == hi) {
      const double sigma = std::sqrt(n * p * (1 - p));
      CAPTURE(k);
      CHECK(std::abs(c - n * p) <= 5 * sigma + 1);
      p = 0;
      c = 0;
      ++groups;
    }
  }
  CHECK(groups >= 9);
}

double weibull_cdf(double x, double k, double lambda) {
  return x <= 0 ? 0.0 : 1.0 - std::exp(-std::pow(x / lambda, k));
}

}  // namespace

TEST_CASE("uniform generator") {
  CHECK(gen_uniform(DistributionSpec::uniform(20, 20, 150, 3), 1).items ==
        std::vector<int>{20, 20, 20});

  const auto big = gen_uniform(DistributionSpec::uniform(20, 100, 150, 1'000'000), 99);
  double sum = 0;
  for (int x : big.items) sum += x;
  CHECK(sum / big.items.size() == doctest::Approx(60.0).epsilon(0.1 / 60));
  check_deciles(big.items, 20, 100, [](int) { return 1.0 / 81; });

  const auto spec = DistributionSpec::uniform(20, 100, 150, 500);
  CHECK(gen_uniform(spec, 5) == gen_uniform(spec, 5));
  CHECK(gen_uniform(spec, 5).items != gen_uniform(spec, 6).items);
  CHECK(gen_uniform(spec, 5).meta == "uniform(20,100)");
}

TEST_CASE("weibull generator") {
  const double k = 3, lambda = 45;
  const auto big = gen_weibull(DistributionSpec::weibull(k, lambda, 100, 1'000'000), 7);
  double sum = 0;
  long small = 0;
  for (int x : big.items) {
    sum += x;
    small += x < 21 ? 1 : 0;
  }
  CHECK(sum / big.items.size() == doctest::Approx(lambda * std::tgamma(1 + 1 / k)).epsilon(0.2 / 40.18));
  // Sizes below 21 are the continuous draws below 20.5 after rounding.
  const double p_small = weibull_cdf(20.5, k, lambda);
  CHECK(p_small == doctest::Approx(0.0902).epsilon(0.001 / 0.0902));
  CHECK(static_cast<double>(small) / big.items.size() == doctest::Approx(p_small).epsilon(0.005 / p_small));

  check_deciles(big.items, 1, 100, [&](int x) {
    const double upper = x == 100 ? INFINITY : x + 0.5;
    const double lower = x == 1 ? 0.0 : x - 0.5;
    return (std::isinf(upper) ? 1.0 : weibull_cdf(upper, k, lambda)) - weibull_cdf(lower, k, lambda);
  });

  const auto spec = DistributionSpec::weibull(3, 45, 100, 1000);
  CHECK(gen_weibull(spec, 3) == gen_weibull(spec, 3));
  CHECK(gen_weibull(spec, 3).meta == "weibull(3,45)");

  // Heavy clamping at both ends stays inside [1, capacity].
  for (int x : gen_weibull(DistributionSpec::weibull(0.5, 60, 100, 10000), 1).items) {
    REQUIRE(x >= 1);
    REQUIRE(x <= 100);
  }
}

TEST_CASE("adversarial generator") {
  const auto inst = gen_adversarial(DistributionSpec::adversarial(42, 24, 150, 6));
  CHECK(inst.items == std::vector<int>(6, 42));
  const auto run = pack_instance(inst, HeuristicSpec::ab(HeuristicKind::AbFirstFit, 5, 24), true);
  CHECK(run.bins_used == 3);
  CHECK(predicted_fill(150, 24, 10) == 12);
  CHECK(oracle::fill_count(150, 24, 10) == 12);
  CHECK_THROWS_AS(validate(DistributionSpec::adversarial(42, 24, 150, 0)), ParameterError);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(validate(DistributionSpec::uniform(50, 20, 150, 10)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::uniform(0, 20, 150, 10)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::uniform(20, 151, 150, 10)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::uniform(20, 100, 150, 0)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::weibull(0, 45, 100, 10)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::weibull(3, -1, 100, 10)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::adversarial(10, 150, 150, 10)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::explicit_sizes({5, 200}, 150)), ParameterError);
  CHECK_THROWS_AS(validate(DistributionSpec::explicit_sizes({}, 150)), ParameterError);
}

TEST_CASE("distribution tags round-trip") {
  for (const char* text : {"uniform(20,100)", "weibull(3,45)", "weibull(7,75)",
                           "weibull(2.5,30.25)", "adversarial(42,24)", "explicit(5,7,9)"}) {
    const auto d = parse_distribution(text, 150, 10);
    CHECK(tag(d) == text);
  }
  CHECK(parse_distribution(" Uniform( 20 , 100 ) ", 150, 10).high == 100);
  CHECK(parse_distribution("explicit(5,7,9)", 150, 999).n_items == 3);
  CHECK_THROWS_AS(parse_distribution("normal(1,2)", 150, 10), ParameterError);
  CHECK_THROWS_AS(parse_distribution("uniform(20)", 150, 10), ParameterError);
  CHECK_THROWS_AS(parse_distribution("uniform(20,x)", 150, 10), ParameterError);
  CHECK_THROWS_AS(parse_distribution("uniform", 150, 10), ParameterError);
}

TEST_CASE("batteries") {
  const auto spec = DistributionSpec::uniform(20, 100, 150, 120);
  CHECK(gen_battery(spec, 1, 4).size() == 1);
  const auto a = gen_battery(spec, 100, 4);
  const auto b = gen_battery(spec, 100, 4);
  CHECK(a == b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == battery_instance(spec, 4, i));
    CHECK(a[i].seed == stream_seed(4, i));
    for (std::size_t j = i + 1; j < a.size(); ++j) REQUIRE(a[i].items != a[j].items);
  }
  CHECK(gen_battery(spec, 3, 5)[0].items != a[0].items);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t m = 0; m < 50; ++m) {
    for (std::uint64_t i = 0; i < 50; ++i) seeds.insert(stream_seed(m, i));
  }
  CHECK(seeds.size() == 2500);
}

TEST_CASE("rng bounded draws stay in range and cover it") {
  Rng rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  for (int h : hits) CHECK(h > 800);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK(rng.uniform_int(5, 5) == 5);
}
