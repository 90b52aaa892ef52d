#include <doctest.h>

#include <fstream>
#include <sstream>

#include "binlab/errors.hpp"
#include "binlab/generators.hpp"
#include "binlab/instance_io.hpp"
#include "test_util.hpp"

using namespace binlab;

namespace {

Instance read_text(const std::string& text) {
  std::istringstream in(text);
  return read_instance_text(in);
}

}  // namespace

TEST_CASE("text format round-trip") {
  const auto inst = battery_instance(DistributionSpec::weibull(3, 45, 100, 50), 9, 2);
  std::ostringstream out;
  write_instance_text(out, inst);
  const std::string text = out.str();
  CHECK(text.rfind("100 50 " + std::to_string(inst.seed) + " weibull(3,45)\n", 0) == 0);
  CHECK(read_text(text) == inst);
}

TEST_CASE("text reader validates") {
  CHECK(read_text("150 2 7 uniform(20,100)\n30\n40\n").items == std::vector<int>{30, 40});
  CHECK_THROWS_AS(read_text(""), FormatError);
  CHECK_THROWS_AS(read_text("150 2 7\n30\n40\n"), FormatError);
  CHECK_THROWS_AS(read_text("150 3 7 u\n30\n40\n"), FormatError);
  CHECK_THROWS_AS(read_text("150 1 7 u\n30\n40\n"), FormatError);
  CHECK_THROWS_AS(read_text("150 1 7 u\n151\n"), FormatError);
  CHECK_THROWS_AS(read_text("150 1 7 u\n0\n"), FormatError);
  CHECK_THROWS_AS(read_text("150 1 7 u\nabc\n"), FormatError);
  CHECK_THROWS_AS(read_text("150 0 7 u\n"), FormatError);
}

TEST_CASE("json mirror round-trip") {
  const auto inst = battery_instance(DistributionSpec::uniform(20, 100, 150, 30), 1, 0);
  const auto j = to_json(inst);
  CHECK(j.at("n_items") == 30);
  CHECK(j.at("distribution") == "uniform(20,100)");
  CHECK(instance_from_json(j) == inst);

  auto bad = j;
  bad["n_items"] = 31;
  CHECK_THROWS_AS(instance_from_json(bad), FormatError);
  bad = j;
  bad["items"][0] = 500;
  CHECK_THROWS_AS(instance_from_json(bad), FormatError);
  bad = j;
  bad.erase("capacity");
  CHECK_THROWS_AS(instance_from_json(bad), FormatError);
}

TEST_CASE("save and load dispatch on the extension") {
  testutil::TempDir dir;
  const auto inst = battery_instance(DistributionSpec::uniform(20, 100, 150, 25), 3, 1);
  save_instance(dir.path() / "a.txt", inst);
  save_instance(dir.path() / "a.json", inst);
  CHECK(load_instance(dir.path() / "a.txt") == inst);
  CHECK(load_instance(dir.path() / "a.json") == inst);
  CHECK(testutil::slurp(dir.path() / "a.json").front() == '{');

  std::ofstream(dir.path() / "broken.json") << "{not json";
  CHECK_THROWS_AS(load_instance(dir.path() / "broken.json"), FormatError);
  CHECK_THROWS(load_instance(dir.path() / "missing.txt"));
}
