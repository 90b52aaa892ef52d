#include "binlab/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "binlab/analysis.hpp"
#include "binlab/csv.hpp"
#include "binlab/errors.hpp"
#include "binlab/generators.hpp"
#include "binlab/heuristic_spec.hpp"
#include "binlab/instance_io.hpp"

namespace binlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flags, config or parameters: exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KeyInfo {
  const char* name;
  const char* fallback;
  const char* help;
  std::set<std::string> commands;
  bool provenance = true;  // recorded in output headers
};

const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> keys = {
      {"dist", "uniform(20,100)", "item distribution, e.g. uniform(20,100), weibull(3,45)",
       {"gen", "run", "sweep", "curve", "diff"}},
      {"cap", "150", "bin capacity", {"gen", "run", "sweep", "curve", "diff", "adversarial"}},
      {"n_items", "500", "items per instance", {"gen", "run", "sweep", "diff", "adversarial"}},
      {"instances", "100", "instances per battery", {"gen", "run", "sweep", "curve"}},
      {"seed", "1", "master seed (env BINLAB_SEED)", {"gen", "run", "sweep", "curve", "diff"}},
      {"jobs", "0", "worker threads, 0 = all cores (env BINLAB_JOBS)",
       {"run", "sweep", "curve"}, false},
      {"out", "results", "output directory",
       {"gen", "run", "sweep", "curve", "diff", "adversarial", "report"}, false},
      {"format", "text", "instance file format: text or json", {"gen"}},
      {"heuristics", "bestfit", "comma-separated heuristic specs", {"run", "curve"}},
      {"baseline", "ff", "ab baseline: ff, bf or wf", {"sweep", "adversarial"}},
      {"variant", "faithful", "ab variant: faithful or verbatim", {"sweep"}},
      {"a_range", "0:15", "inclusive a range first:last", {"sweep"}},
      {"b_range", "10:40", "inclusive b range first:last", {"sweep"}},
      {"grid", "", "comma-separated item counts (default 10..100 by 10, 150..500 by 50)",
       {"curve"}},
      {"driver", "c14", "heuristic that evolves the state", {"diff"}},
      {"shadow", "worstfit", "counterfactual heuristic", {"diff"}},
      {"instance", "", "instance file to diff instead of a generated one", {"diff"}},
      {"a", "5", "tight-band threshold", {"adversarial"}},
      {"b", "24", "mid-band threshold", {"adversarial"}},
      {"s", "42", "constant item size", {"adversarial"}},
  };
  return keys;
}

const KeyInfo* find_key(const std::string& name) {
  for (const auto& k : key_table()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  if (!find_key(key)) throw FormatError("unknown config key '" + key + "'");
  return key;
}

std::string json_scalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_array()) {
    std::string joined;
    for (const auto& e : v) {
      if (!joined.empty()) joined += ',';
      joined += json_scalar(e, key);
    }
    return joined;
  }
  throw FormatError("config key '" + key + "' has an unsupported value " + v.dump());
}

// Splits "k=v k2=\"v w\"" respecting quotes.
Settings parse_assignments(std::string_view text) {
  Settings out;
  std::istringstream in{std::string(text)};
  while (in >> std::ws && in.peek() != EOF) {
    std::string key;
    char c = 0;
    while (in.get(c) && c != '=' && !std::isspace(static_cast<unsigned char>(c))) key += c;
    if (c != '=') throw FormatError("expected key=value, got '" + key + "'");
    std::string value;
    if (in.peek() == '"') {
      in >> std::quoted(value);
    } else {
      in >> value;
    }
    out[normalize_key(key)] = value;
  }
  return out;
}

std::string quote_if_needed(const std::string& v) {
  const bool plain = !v.empty() && std::none_of(v.begin(), v.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\\';
  });
  if (plain) return v;
  std::ostringstream os;
  os << std::quoted(v);
  return os.str();
}

// ---------------------------------------------------------------------------
// Typed access to resolved settings
// ---------------------------------------------------------------------------

long long parse_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw UsageError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

struct Config {
  std::string command;
  Settings values;  // every key applicable to command, resolved

  const std::string& str(const std::string& key) const { return values.at(key); }

  long long integer(const std::string& key) const { return parse_int(key, str(key)); }

  int positive(const std::string& key) const {
    const long long v = integer(key);
    if (v < 1 || v > 100'000'000) throw UsageError(key + " must be a positive integer");
    return static_cast<int>(v);
  }

  std::uint64_t seed() const {
    const auto t = trim(str("seed"));
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw UsageError("seed: expected a non-negative integer, got '" + t + "'");
    }
    return v;
  }

  int jobs() const {
    const long long v = integer("jobs");
    if (v < 0) throw UsageError("jobs must be >= 0");
    return static_cast<int>(v);
  }

  fs::path out_dir() const { return fs::path(str("out")); }
};

const char* kHeuristicGrammar =
    "heuristic grammar: firstfit|ff, bestfit|bf, worstfit|wf, c12, smooth-c12, c14, eoh, "
    "ab-ff(a=A,b=B[,variant=faithful|verbatim]), ab-bf(...), ab-wf(...)";

HeuristicSpec heuristic_arg(const std::string& text, int capacity) {
  try {
    auto h = parse_heuristic(text);
    validate(h, capacity);
    return h;
  } catch (const ParameterError& e) {
    throw UsageError(std::string(e.what()) + "\n" + kHeuristicGrammar);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  // Commas inside parentheses belong to an ab spec.
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
  return parts;
}

std::vector<HeuristicSpec> heuristic_list(const Config& cfg, int capacity) {
  std::vector<HeuristicSpec> hs;
  for (const auto& part : split_list(cfg.str("heuristics"))) {
    hs.push_back(heuristic_arg(part, capacity));
  }
  if (hs.empty()) throw UsageError("no heuristics given\n" + std::string(kHeuristicGrammar));
  return hs;
}

IntRange range_arg(const Config& cfg, const std::string& key) {
  const auto& text = cfg.str(key);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(key + ": expected first:last");
  IntRange r{static_cast<int>(parse_int(key, text.substr(0, colon))),
             static_cast<int>(parse_int(key, text.substr(colon + 1)))};
  if (r.first < 0 || r.first > r.last) throw UsageError(key + ": need 0 <= first <= last");
  return r;
}

DistributionSpec distribution_arg(const Config& cfg, int n_items) {
  try {
    auto d = parse_distribution(cfg.str("dist"), cfg.positive("cap"), n_items);
    validate(d);
    return d;
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return f;
}

void finish_output(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void write_summary(const Config& cfg, json results) {
  json j;
  j["command"] = cfg.command;
  j["provenance"] = provenance_line(cfg.command, cfg.values);
  j["results"] = std::move(results);
  const fs::path path = cfg.out_dir() / ("summary_" + cfg.command + ".json");
  auto f = open_output(path);
  f << j.dump(2) << '\n';
  finish_output(f, path);
}

json summary_json(const RatioSummary& s) {
  return {{"mean", s.mean},     {"median", s.median}, {"q1", s.q1},
          {"q3", s.q3},         {"min", s.min},       {"max", s.max},
          {"aggregate", s.aggregate}};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

void cmd_gen(const Config& cfg, std::ostream& out) {
  const int n_items = cfg.positive("n_items");
  const auto dist = distribution_arg(cfg, n_items);
  const int instances = cfg.positive("instances");
  const auto& format = cfg.str("format");
  if (format != "text" && format != "json") throw UsageError("format must be text or json");
  const std::string ext = format == "json" ? ".json" : ".txt";

  for (int i = 0; i < instances; ++i) {
    std::ostringstream name;
    name << "instance_" << std::setw(4) << std::setfill('0') << i << ext;
    const fs::path path = cfg.out_dir() / name.str();
    std::error_code ec;
    fs::create_directories(cfg.out_dir(), ec);
    save_instance(path, battery_instance(dist, cfg.seed(), static_cast<std::size_t>(i)));
  }
  out << "wrote " << instances << " instance(s) to " << cfg.out_dir().string() << '\n';
}

void cmd_run(const Config& cfg, std::ostream& out) {
  const int n_items = cfg.positive("n_items");
  const auto dist = distribution_arg(cfg, n_items);
  const auto hs = heuristic_list(cfg, dist.capacity);
  const auto results =
      run_battery(dist, hs, static_cast<std::size_t>(cfg.positive("instances")), cfg.seed(),
                  cfg.jobs());

  const fs::path path = cfg.out_dir() / "battery.csv";
  auto f = open_output(path);
  CsvWriter csv(f);
  csv.comment(provenance_line(cfg.command, cfg.values));
  csv.field("distribution").field("heuristic").field("instance_id").field("bins_used")
      .field("bestfit_bins").field("ratio");
  csv.end_row();
  const std::string dtag = tag(dist);
  for (const auto& r : results) {
    const std::string name = to_string(r.heuristic);
    for (const auto& row : r.per_instance) {
      csv.field(dtag).field(name).field(row.instance_id).field(row.bins_used)
          .field(row.bestfit_bins).field(row.ratio);
      csv.end_row();
    }
  }
  finish_output(f, path);

  json summary = json::array();
  out << std::left << std::setw(36) << "heuristic" << std::right << std::setw(10) << "mean"
      << std::setw(10) << "median" << std::setw(10) << "q1" << std::setw(10) << "q3"
      << std::setw(11) << "aggregate" << '\n';
  for (const auto& r : results) {
    const std::string name = to_string(r.heuristic);
    const auto& s = r.summary;
    out << std::left << std::setw(36) << name << std::right << std::fixed
        << std::setprecision(4) << std::setw(10) << s.mean << std::setw(10) << s.median
        << std::setw(10) << s.q1 << std::setw(10) << s.q3 << std::setw(11) << s.aggregate
        << '\n';
    auto j = summary_json(s);
    j["heuristic"] = name;
    summary.push_back(std::move(j));
  }
  out << "wrote " << path.string() << '\n';
  write_summary(cfg, std::move(summary));
}

void cmd_sweep(const Config& cfg, std::ostream& out) {
  const int n_items = cfg.positive("n_items");
  const auto dist = distribution_arg(cfg, n_items);
  HeuristicKind kind;
  AbVariant variant;
  try {
    kind = parse_ab_baseline(cfg.str("baseline"));
    variant = parse_variant(cfg.str("variant"));
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  const auto ar = range_arg(cfg, "a_range");
  const auto br = range_arg(cfg, "b_range");
  if (br.last >= dist.capacity) throw UsageError("b_range must stay below the capacity");

  const auto result = ab_sweep(dist, kind, variant, ar, br,
                               static_cast<std::size_t>(cfg.positive("instances")),
                               cfg.seed(), cfg.jobs());

  const fs::path path = cfg.out_dir() / "sweep.csv";
  auto f = open_output(path);
  CsvWriter csv(f);
  csv.comment(provenance_line(cfg.command, cfg.values));
  csv.field("a").field("b").field("mean_ratio");
  csv.end_row();
  for (const auto& c : result.cells) {
    csv.field(c.a).field(c.b).field(c.mean_ratio);
    csv.end_row();
  }
  finish_output(f, path);

  out << "best a=" << result.best.a << " b=" << result.best.b
      << " mean_ratio=" << format_fixed6(result.best.mean_ratio) << '\n';
  out << "wrote " << path.string() << '\n';
  write_summary(cfg, {{"cells", result.cells.size()},
                      {"best", {{"a", result.best.a},
                                {"b", result.best.b},
                                {"mean_ratio", result.best.mean_ratio}}}});
}

std::vector<int> grid_arg(const Config& cfg) {
  const auto& text = cfg.str("grid");
  if (trim(text).empty()) return default_curve_grid();
  std::vector<int> grid;
  for (const auto& part : split_list(text)) {
    const long long v = parse_int("grid", part);
    if (v < 1 || v > 100'000'000) throw UsageError("grid values must be positive");
    grid.push_back(static_cast<int>(v));
  }
  if (grid.empty()) throw UsageError("grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw UsageError("grid must be strictly increasing");
  }
  return grid;
}

void cmd_curve(const Config& cfg, std::ostream& out) {
  const auto grid = grid_arg(cfg);
  const auto dist = distribution_arg(cfg, grid.front());
  const auto hs = heuristic_list(cfg, dist.capacity);
  const auto n_instances = static_cast<std::size_t>(cfg.positive("instances"));

  const fs::path path = cfg.out_dir() / "curve.csv";
  std::vector<std::vector<CurvePoint>> curves;
  for (const auto& h : hs) {
    curves.push_back(growing_curve(dist, h, grid, n_instances, cfg.seed(), cfg.jobs()));
  }

  auto f = open_output(path);
  CsvWriter csv(f);
  csv.comment(provenance_line(cfg.command, cfg.values));
  csv.field("heuristic").field("n_items").field("mean_ratio").field("n_instances");
  csv.end_row();
  json summary = json::array();
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const std::string name = to_string(hs[k]);
    for (const auto& p : curves[k]) {
      csv.field(name).field(p.n_items).field(p.mean_ratio).field(p.n_instances);
      csv.end_row();
    }
    const auto x = crossover(curves[k]);
    out << name << ": crossover " << (x ? format_fixed6(*x) : std::string("none")) << '\n';
    summary.push_back({{"heuristic", name},
                       {"crossover", x ? json(*x) : json(nullptr)}});
  }
  finish_output(f, path);
  out << "wrote " << path.string() << '\n';
  write_summary(cfg, std::move(summary));
}

// Returns the number of b_new_a_old events.
std::size_t cmd_diff(const Config& cfg, std::ostream& out) {
  Instance inst;
  if (!trim(cfg.str("instance")).empty()) {
    inst = load_instance(cfg.str("instance"));
  } else {
    const auto dist = distribution_arg(cfg, cfg.positive("n_items"));
    inst = battery_instance(dist, cfg.seed(), 0);
  }
  const auto driver = heuristic_arg(cfg.str("driver"), inst.capacity);
  const auto shadow = heuristic_arg(cfg.str("shadow"), inst.capacity);
  const auto diff = behavior_diff(inst, driver, shadow);

  const fs::path path = cfg.out_dir() / "diff.csv";
  {
    auto f = open_output(path);
    CsvWriter csv(f);
    csv.comment(provenance_line(cfg.command, cfg.values));
    csv.field("category").field("count");
    csv.end_row();
    for (std::size_t c = 0; c < kDiffCategoryCount; ++c) {
      csv.field(to_string(static_cast<DiffCategory>(c))).field(diff.counts[c]);
      csv.end_row();
    }
    finish_output(f, path);
  }
  const fs::path events_path = cfg.out_dir() / "diff_events.csv";
  {
    auto f = open_output(events_path);
    CsvWriter csv(f);
    csv.comment(provenance_line(cfg.command, cfg.values));
    csv.field("item_index").field("item_size").field("remaining_after")
        .field("remaining_before");
    csv.end_row();
    for (const auto& e : diff.events) {
      csv.field(e.item_index).field(e.item_size).field(e.remaining_after)
          .field(e.remaining_before);
      csv.end_row();
    }
    finish_output(f, events_path);
  }

  const auto scan = threshold_scan(diff);
  json counts = json::object();
  for (std::size_t c = 0; c < kDiffCategoryCount; ++c) {
    const auto name = to_string(static_cast<DiffCategory>(c));
    out << std::left << std::setw(14) << name << diff.counts[c] << '\n';
    counts[name] = diff.counts[c];
  }
  out << "max remaining_after over a_new_b_old: "
      << (scan.max_remaining_after ? std::to_string(*scan.max_remaining_after) : "none")
      << '\n';
  out << "wrote " << path.string() << " and " << events_path.string() << '\n';
  write_summary(cfg, {{"counts", counts},
                      {"items", diff.items},
                      {"max_remaining_after", scan.max_remaining_after
                                                  ? json(*scan.max_remaining_after)
                                                  : json(nullptr)}});
  return diff.count(DiffCategory::ShadowNewDriverOld);
}

void cmd_adversarial(const Config& cfg, std::ostream& out) {
  const int cap = cfg.positive("cap");
  const int n = cfg.positive("n_items");
  const int s = cfg.positive("s");
  const long long a = cfg.integer("a");
  const long long b = cfg.integer("b");
  if (a < 0 || a >= b || b >= cap) throw UsageError("need 0 <= a < b < cap");
  if (s > cap) throw UsageError("s must not exceed the capacity");
  HeuristicKind kind;
  try {
    kind = parse_ab_baseline(cfg.str("baseline"));
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  AdversarialReport r;
  try {
    r = adversarial_check(cap, static_cast<int>(a), static_cast<int>(b), s, n, kind);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }

  const fs::path path = cfg.out_dir() / "adversarial.csv";
  auto f = open_output(path);
  CsvWriter csv(f);
  csv.comment(provenance_line(cfg.command, cfg.values));
  csv.field("c").field("a").field("b").field("s").field("m").field("measured_ratio")
      .field("lower_bound_ratio");
  csv.end_row();
  csv.field(r.capacity).field(r.a).field(r.b).field(r.item).field(r.predicted_fill)
      .field(r.measured_ratio).field(r.lower_bound_ratio);
  csv.end_row();
  finish_output(f, path);

  out << "m=" << r.predicted_fill << " fills_match=" << (r.fills_match ? "yes" : "no")
      << " bins=" << r.bins_used << " measured_ratio=" << format_fixed6(r.measured_ratio)
      << " lower_bound_ratio=" << format_fixed6(r.lower_bound_ratio)
      << " c/(c-b)=" << format_fixed6(r.degradation_bound) << '\n';
  out << "wrote " << path.string() << '\n';
  write_summary(cfg, {{"m", r.predicted_fill},
                      {"fills_match", r.fills_match},
                      {"bins_used", r.bins_used},
                      {"measured_ratio", r.measured_ratio},
                      {"lower_bound_ratio", r.lower_bound_ratio},
                      {"degradation_bound", r.degradation_bound}});
}

void cmd_report(const Config& cfg, std::ostream& out) {
  const fs::path dir = cfg.out_dir();
  if (!fs::is_directory(dir)) throw std::runtime_error("no such directory " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("summary_") &&
        entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  json report;
  report["summaries"] = json::array();
  for (const auto& p : files) {
    std::ifstream in(p);
    try {
      report["summaries"].push_back(json::parse(in));
    } catch (const json::exception& e) {
      throw std::runtime_error(p.string() + ": " + e.what());
    }
  }
  const fs::path path = dir / "report.json";
  auto f = open_output(path);
  f << report.dump(2) << '\n';
  finish_output(f, path);
  out << "merged " << files.size() << " summary file(s) into " << path.string() << '\n';
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config resolve(const std::string& command, const std::map<std::string, std::string>& flags,
               const std::string& config_path) {
  Config cfg;
  cfg.command = command;
  for (const auto& k : key_table()) {
    if (k.commands.count(command)) cfg.values[k.name] = k.fallback;
  }
  auto apply = [&](const Settings& s) {
    for (const auto& [k, v] : s) {
      if (cfg.values.count(k)) cfg.values[k] = v;
    }
  };
  if (!config_path.empty()) {
    try {
      apply(parse_config_text(read_file(config_path)));
    } catch (const FormatError& e) {
      throw UsageError(config_path + ": " + e.what());
    }
  }
  Settings env;
  if (const char* v = std::getenv("BINLAB_SEED")) env["seed"] = v;
  if (const char* v = std::getenv("BINLAB_JOBS")) env["jobs"] = v;
  apply(env);
  apply(flags);

  // Canonical spellings so that the provenance line is stable.
  if (cfg.values.count("dist") && cfg.values.count("cap")) {
    const int n = cfg.values.count("n_items") ? cfg.positive("n_items") : 1;
    cfg.values["dist"] = tag(distribution_arg(cfg, n));
  }
  if (cfg.values.count("heuristics")) {
    std::string joined;
    for (const auto& h : heuristic_list(cfg, cfg.positive("cap"))) {
      if (!joined.empty()) joined += ',';
      joined += to_string(h);
    }
    cfg.values["heuristics"] = joined;
  }
  return cfg;
}

}  // namespace

Settings parse_config_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};

  if (text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw FormatError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("JSON config must be an object");
    Settings out;
    for (const auto& [k, v] : j.items()) {
      const auto key = normalize_key(k);
      out[key] = json_scalar(v, key);
    }
    return out;
  }

  constexpr std::string_view kProvenance = "# binlab ";
  if (text.substr(first).starts_with(kProvenance)) {
    auto line = text.substr(first + kProvenance.size());
    line = line.substr(0, line.find('\n'));
    const auto space = line.find(' ');
    if (space == std::string_view::npos) return {};
    return parse_assignments(line.substr(space + 1));
  }

  Settings out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
    }
    out[normalize_key(trim(t.substr(0, eq)))] = trim(t.substr(eq + 1));
  }
  return out;
}

std::string provenance_line(std::string_view command, const Settings& settings) {
  std::string line = "binlab " + std::string(command);
  for (const auto& [k, v] : settings) {
    const KeyInfo* info = find_key(k);
    if (info && !info->provenance) continue;
    line += ' ' + k + '=' + quote_if_needed(v);
  }
  return line;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online bin-packing heuristic laboratory", "binlab"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen", "write seeded instance files"},
      {"run", "battery of heuristics vs BestFit -> battery.csv"},
      {"sweep", "ab-family (a, b) grid -> sweep.csv"},
      {"curve", "mean ratio as the item count grows -> curve.csv"},
      {"diff", "driver vs counterfactual shadow decisions -> diff.csv, diff_events.csv"},
      {"adversarial", "constant item stream against an ab heuristic -> adversarial.csv"},
      {"report", "merge summary_*.json in the output directory into report.json"},
  };

  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::map<std::string, CLI::Option*>> flag_options;
  std::map<std::string, std::string> config_paths;
  bool assert_impossible = false;

  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    for (const auto& k : key_table()) {
      if (!k.commands.count(name)) continue;
      std::string flag = std::string("--") + k.name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      std::string help = std::string(k.help);
      if (*k.fallback) help += " [default: " + std::string(k.fallback) + "]";
      flag_options[name][k.name] = sub->add_option(flag, flag_values[name][k.name], help);
    }
    sub->add_option("--config", config_paths[name], "config file (key = value, JSON, or a CSV)");
    if (name == "diff") {
      sub->add_flag("--assert-impossible", assert_impossible,
                    "exit 1 if the shadow opens a bin while the driver reuses one");
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::map<std::string, std::string> flags;
  for (const auto& [key, opt] : flag_options[command]) {
    if (opt->count() > 0) flags[key] = flag_values[command][key];
  }

  try {
    const Config cfg = resolve(command, flags, config_paths[command]);
    if (command == "gen") cmd_gen(cfg, out);
    else if (command == "run") cmd_run(cfg, out);
    else if (command == "sweep") cmd_sweep(cfg, out);
    else if (command == "curve") cmd_curve(cfg, out);
    else if (command == "adversarial") cmd_adversarial(cfg, out);
    else if (command == "report") cmd_report(cfg, out);
    else if (command == "diff") {
      const std::size_t impossible = cmd_diff(cfg, out);
      if (assert_impossible && impossible > 0) {
        err << "error: shadow opened a new bin " << impossible
            << " time(s) while the driver used an open bin\n";
        return 1;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace binlab
