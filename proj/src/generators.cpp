#include "binlab/generators.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "binlab/errors.hpp"

namespace binlab {

DistributionSpec DistributionSpec::uniform(int low, int high, int capacity, int n_items) {
  DistributionSpec d;
  d.kind = DistributionKind::UniformInt;
  d.low = low;
  d.high = high;
  d.capacity = capacity;
  d.n_items = n_items;
  return d;
}

DistributionSpec DistributionSpec::weibull(double shape, double scale, int capacity,
                                           int n_items) {
  DistributionSpec d;
  d.kind = DistributionKind::Weibull;
  d.shape = shape;
  d.scale = scale;
  d.capacity = capacity;
  d.n_items = n_items;
  return d;
}

DistributionSpec DistributionSpec::adversarial(int item, int b_threshold, int capacity,
                                               int n_items) {
  DistributionSpec d;
  d.kind = DistributionKind::Adversarial;
  d.item = item;
  d.b_threshold = b_threshold;
  d.capacity = capacity;
  d.n_items = n_items;
  return d;
}

DistributionSpec DistributionSpec::explicit_sizes(std::vector<int> sizes, int capacity) {
  DistributionSpec d;
  d.kind = DistributionKind::Explicit;
  d.n_items = static_cast<int>(sizes.size());
  d.sizes = std::move(sizes);
  d.capacity = capacity;
  return d;
}

DistributionSpec DistributionSpec::with_items(int n) const {
  DistributionSpec d = *this;
  d.n_items = n;
  return d;
}

namespace {

std::string number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string trim_lower(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  return out;
}

std::vector<std::string> split_args(const std::string& body) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = body.find(',', pos);
    std::string arg = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    // Accept "key=value" spellings such as adversarial(s=42,b=24).
    if (const auto eq = arg.find('='); eq != std::string::npos) arg = arg.substr(eq + 1);
    out.push_back(arg);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& s, std::string_view whole) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParameterError("invalid number '" + s + "' in distribution '" + std::string(whole) +
                         "'");
  }
  return value;
}

void expect_args(const std::vector<std::string>& args, std::size_t n, std::string_view whole) {
  if (args.size() != n) {
    throw ParameterError("distribution '" + std::string(whole) + "' expects " +
                         std::to_string(n) + " arguments");
  }
}

}  // namespace

std::string tag(const DistributionSpec& spec) {
  switch (spec.kind) {
    case DistributionKind::UniformInt:
      return "uniform(" + std::to_string(spec.low) + "," + std::to_string(spec.high) + ")";
    case DistributionKind::Weibull:
      return "weibull(" + number(spec.shape) + "," + number(spec.scale) + ")";
    case DistributionKind::Adversarial:
      return "adversarial(" + std::to_string(spec.item) + "," +
             std::to_string(spec.b_threshold) + ")";
    case DistributionKind::Explicit: {
      std::string out = "explicit(";
      for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(spec.sizes[i]);
      }
      return out + ")";
    }
  }
  return "unknown";
}

DistributionSpec parse_distribution(std::string_view text, int capacity, int n_items) {
  const std::string s = trim_lower(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw ParameterError("distribution '" + std::string(text) +
                         "' must look like name(args), e.g. uniform(20,100)");
  }
  const std::string name = s.substr(0, open);
  const auto args = split_args(s.substr(open + 1, s.size() - open - 2));

  DistributionSpec d;
  if (name == "uniform" || name == "u") {
    expect_args(args, 2, text);
    d = DistributionSpec::uniform(parse_number<int>(args[0], text),
                                  parse_number<int>(args[1], text), capacity, n_items);
  } else if (name == "weibull" || name == "w") {
    expect_args(args, 2, text);
    d = DistributionSpec::weibull(parse_number<double>(args[0], text),
                                  parse_number<double>(args[1], text), capacity, n_items);
  } else if (name == "adversarial") {
    expect_args(args, 2, text);
    d = DistributionSpec::adversarial(parse_number<int>(args[0], text),
                                      parse_number<int>(args[1], text), capacity, n_items);
  } else if (name == "explicit") {
    std::vector<int> sizes;
    for (const auto& a : args) sizes.push_back(parse_number<int>(a, text));
    d = DistributionSpec::explicit_sizes(std::move(sizes), capacity);
  } else {
    throw ParameterError("unknown distribution '" + name +
                         "' (expected uniform, weibull, adversarial or explicit)");
  }
  validate(d);
  return d;
}

void validate(const DistributionSpec& spec) {
  if (spec.capacity < 1) throw ParameterError("capacity must be positive");
  if (spec.n_items < 1) throw ParameterError("n_items must be positive");
  switch (spec.kind) {
    case DistributionKind::UniformInt:
      if (spec.low < 1 || spec.low > spec.high || spec.high > spec.capacity) {
        throw ParameterError("uniform requires 1 <= low <= high <= capacity");
      }
      break;
    case DistributionKind::Weibull:
      if (!(spec.shape > 0.0) || !(spec.scale > 0.0) || !std::isfinite(spec.shape) ||
          !std::isfinite(spec.scale)) {
        throw ParameterError("weibull requires shape > 0 and scale > 0");
      }
      break;
    case DistributionKind::Adversarial:
      if (spec.item < 1 || spec.item > spec.capacity || spec.b_threshold < 1 ||
          spec.b_threshold >= spec.capacity) {
        throw ParameterError("adversarial requires 1 <= s <= capacity and 1 <= b < capacity");
      }
      break;
    case DistributionKind::Explicit:
      if (spec.sizes.empty()) throw ParameterError("explicit distribution needs sizes");
      if (static_cast<std::size_t>(spec.n_items) != spec.sizes.size()) {
        throw ParameterError("explicit distribution: n_items must equal the list length");
      }
      for (int s : spec.sizes) {
        if (s < 1 || s > spec.capacity) {
          throw ParameterError("explicit size " + std::to_string(s) + " outside [1, capacity]");
        }
      }
      break;
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t instance_index) {
  return mix64(master_seed ^ mix64(instance_index));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire, "Fast Random Integer Generation in an Interval" (2019).
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

int Rng::uniform_int(int low, int high) {
  const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(high) - low) + 1;
  return static_cast<int>(low + static_cast<std::int64_t>(below(span)));
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

Instance shell(const DistributionSpec& spec, std::uint64_t seed) {
  validate(spec);
  Instance inst;
  inst.capacity = spec.capacity;
  inst.meta = tag(spec);
  inst.seed = seed;
  inst.items.reserve(static_cast<std::size_t>(spec.n_items));
  return inst;
}

void expect_kind(const DistributionSpec& spec, DistributionKind kind, const char* what) {
  if (spec.kind != kind) throw ParameterError(std::string(what) + ": wrong distribution kind");
}

}  // namespace

Instance gen_uniform(const DistributionSpec& spec, std::uint64_t seed) {
  expect_kind(spec, DistributionKind::UniformInt, "gen_uniform");
  Instance inst = shell(spec, seed);
  Rng rng(seed);
  for (int i = 0; i < spec.n_items; ++i) inst.items.push_back(rng.uniform_int(spec.low, spec.high));
  return inst;
}

Instance gen_weibull(const DistributionSpec& spec, std::uint64_t seed) {
  expect_kind(spec, DistributionKind::Weibull, "gen_weibull");
  Instance inst = shell(spec, seed);
  Rng rng(seed);
  const double inv_shape = 1.0 / spec.shape;
  for (int i = 0; i < spec.n_items; ++i) {
    const double x = spec.scale * std::pow(-std::log1p(-rng.unit()), inv_shape);
    const double rounded = std::min(std::round(x), static_cast<double>(spec.capacity));
    inst.items.push_back(std::clamp(static_cast<int>(rounded), 1, spec.capacity));
  }
  return inst;
}

Instance gen_adversarial(const DistributionSpec& spec) {
  expect_kind(spec, DistributionKind::Adversarial, "gen_adversarial");
  Instance inst = shell(spec, 0);
  inst.items.assign(static_cast<std::size_t>(spec.n_items), spec.item);
  return inst;
}

Instance gen_explicit(const DistributionSpec& spec) {
  expect_kind(spec, DistributionKind::Explicit, "gen_explicit");
  Instance inst = shell(spec, 0);
  inst.items = spec.sizes;
  return inst;
}

Instance generate(const DistributionSpec& spec, std::uint64_t seed) {
  Instance inst;
  switch (spec.kind) {
    case DistributionKind::UniformInt: return gen_uniform(spec, seed);
    case DistributionKind::Weibull: return gen_weibull(spec, seed);
    case DistributionKind::Adversarial: inst = gen_adversarial(spec); break;
    case DistributionKind::Explicit: inst = gen_explicit(spec); break;
  }
  inst.seed = seed;
  return inst;
}

Instance battery_instance(const DistributionSpec& spec, std::uint64_t master_seed,
                          std::size_t index) {
  return generate(spec, stream_seed(master_seed, index));
}

std::vector<Instance> gen_battery(const DistributionSpec& spec, std::size_t n_instances,
                                  std::uint64_t master_seed) {
  std::vector<Instance> out;
  out.reserve(n_instances);
  for (std::size_t i = 0; i < n_instances; ++i) {
    out.push_back(battery_instance(spec, master_seed, i));
  }
  return out;
}

}  // namespace binlab
