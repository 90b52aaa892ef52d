#include "binlab/instance_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "binlab/errors.hpp"

namespace binlab {

void write_instance_text(std::ostream& out, const Instance& instance) {
  const std::string tag = instance.meta.empty() ? "unknown" : instance.meta;
  out << instance.capacity << ' ' << instance.items.size() << ' ' << instance.seed << ' '
      << tag << '\n';
  for (int s : instance.items) out << s << '\n';
}

Instance read_instance_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("instance: missing header line");
  std::istringstream hs(header);
  Instance inst;
  long long n = 0;
  if (!(hs >> inst.capacity >> n >> inst.seed >> inst.meta)) {
    throw FormatError("instance: header must be 'capacity n_items seed dist_tag', got '" +
                      header + "'");
  }
  if (std::string extra; hs >> extra) {
    throw FormatError("instance: trailing data in header '" + header + "'");
  }
  if (n < 1) throw FormatError("instance: n_items must be positive");

  inst.items.reserve(static_cast<std::size_t>(n));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int s = 0;
    std::string extra;
    if (!(ls >> s) || (ls >> extra)) {
      throw FormatError("instance: bad size line '" + line + "'");
    }
    inst.items.push_back(s);
  }
  if (static_cast<long long>(inst.items.size()) != n) {
    throw FormatError("instance: header declares " + std::to_string(n) + " items, found " +
                      std::to_string(inst.items.size()));
  }
  try {
    validate(inst);
  } catch (const ParameterError& e) {
    throw FormatError(std::string("instance: ") + e.what());
  }
  return inst;
}

nlohmann::json to_json(const Instance& instance) {
  return nlohmann::json{{"capacity", instance.capacity},
                        {"n_items", instance.items.size()},
                        {"seed", instance.seed},
                        {"distribution", instance.meta},
                        {"items", instance.items}};
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  try {
    inst.capacity = j.at("capacity").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.meta = j.at("distribution").get<std::string>();
    inst.items = j.at("items").get<std::vector<int>>();
    if (j.contains("n_items") && j.at("n_items").get<std::size_t>() != inst.items.size()) {
      throw FormatError("instance: n_items does not match the item list");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("instance: ") + e.what());
  }
  try {
    validate(inst);
  } catch (const ParameterError& e) {
    throw FormatError(std::string("instance: ") + e.what());
  }
  return inst;
}

void save_instance(const std::filesystem::path& path, const Instance& instance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (path.extension() == ".json") {
    out << to_json(instance).dump(2) << '\n';
  } else {
    write_instance_text(out, instance);
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    if (path.extension() == ".json") {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("instance: ") + e.what());
      }
      return instance_from_json(j);
    }
    return read_instance_text(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace binlab
