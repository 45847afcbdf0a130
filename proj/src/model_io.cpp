#include "credal_chain/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "credal_chain/errors.hpp"

namespace credal {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(where + ": expected a number, got " + v.dump());
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0) {
    throw ParseError(where + ": expected a positive integer, got " + j.dump());
  }
  return j.get<std::size_t>();
}

ProbabilityInterval interval(const json& j, const Frame& frame, const std::string& where) {
  std::vector<double> lower = numbers(field(j, "lower", where), where + ".lower");
  std::vector<double> upper = numbers(field(j, "upper", where), where + ".upper");
  if (lower.size() != frame.size() || upper.size() != frame.size()) {
    throw ParseError(where + ": expected " + std::to_string(frame.size()) + " bounds");
  }
  try {
    return ProbabilityInterval(frame, std::move(lower), std::move(upper));
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

nlohmann::ordered_json interval_json(const ProbabilityInterval& iv) {
  return {{"lower", iv.lower()}, {"upper", iv.upper()}};
}

}  // namespace

ChainModel ModelFile::chain() const { return ChainModel(frames, prior, links); }

ModelFile parse_model(std::string_view text) {
  const json root = parse_json(text);
  const json& states = field(root, "states", "model");
  if (!states.is_array() || states.size() < 2) {
    throw ParseError("model.states: expected an array of at least two frame sizes");
  }
  std::vector<std::vector<std::string>> labels;
  if (root.contains("labels")) {
    try {
      labels = root.at("labels").get<std::vector<std::vector<std::string>>>();
    } catch (const json::exception&) {
      throw ParseError("model.labels: expected an array of string arrays");
    }
    if (labels.size() != states.size()) throw ParseError("model.labels: one entry per node");
  }
  std::vector<Frame> frames;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string where = "model.states[" + std::to_string(k) + "]";
    const std::size_t n = count(states[k], where);
    const std::string name = "X" + std::to_string(k + 1);
    if (labels.empty()) {
      frames.emplace_back(n, name);
    } else {
      if (labels[k].size() != n) throw ParseError("model.labels[" + std::to_string(k) + "]: size mismatch");
      frames.emplace_back(name, labels[k]);
    }
  }

  ProbabilityInterval prior = interval(field(root, "prior", "model"), frames[0], "model.prior");
  const json& links_json = field(root, "links", "model");
  if (!links_json.is_array() || links_json.size() + 1 != frames.size()) {
    throw ParseError("model.links: expected " + std::to_string(frames.size() - 1) + " links");
  }
  std::vector<std::vector<ProbabilityInterval>> links;
  for (std::size_t l = 0; l < links_json.size(); ++l) {
    const std::string where = "model.links[" + std::to_string(l) + "]";
    const json& link = links_json[l];
    if (!link.is_array() || link.size() != frames[l].size()) {
      throw ParseError(where + ": expected " + std::to_string(frames[l].size()) + " intervals");
    }
    std::vector<ProbabilityInterval> row;
    for (std::size_t i = 0; i < link.size(); ++i) {
      row.push_back(interval(link[i], frames[l + 1], where + "[" + std::to_string(i) + "]"));
    }
    links.push_back(std::move(row));
  }
  return ModelFile{std::move(frames), std::move(prior), std::move(links)};
}

ModelFile read_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

std::string format_model(const ChainModel& chain) {
  using nlohmann::ordered_json;
  ordered_json root;
  ordered_json states = ordered_json::array();
  ordered_json labels = ordered_json::array();
  bool custom_labels = false;
  for (const Frame& f : chain.frames()) {
    states.push_back(f.size());
    labels.push_back(f.labels());
    custom_labels = custom_labels || f.labels() != Frame(f.size()).labels();
  }
  root["states"] = states;
  if (custom_labels) root["labels"] = labels;
  root["prior"] = interval_json(chain.prior());
  ordered_json links = ordered_json::array();
  for (const auto& link : chain.links()) {
    ordered_json row = ordered_json::array();
    for (const auto& iv : link) row.push_back(interval_json(iv));
    links.push_back(row);
  }
  root["links"] = links;
  return root.dump(2) + "\n";
}

std::string format_interval(const ProbabilityInterval& iv) { return interval_json(iv).dump(); }

MassFunction parse_mass(std::string_view text) {
  const json root = parse_json(text);
  const std::size_t n = count(field(root, "states", "mass"), "mass.states");
  if (n > kMaxStates) throw ParseError("mass.states: too many states");
  const json& focal = field(root, "focal", "mass");
  if (!focal.is_array()) throw ParseError("mass.focal: expected an array");
  std::map<Subset, double> masses;
  for (std::size_t f = 0; f < focal.size(); ++f) {
    const std::string where = "mass.focal[" + std::to_string(f) + "]";
    const json& set = field(focal[f], "set", where);
    if (!set.is_array()) throw ParseError(where + ".set: expected an array of state indices");
    Subset s = 0;
    for (const auto& idx : set) {
      if (!idx.is_number_unsigned() || idx.get<std::uint64_t>() >= n) {
        throw ParseError(where + ".set: bad state index " + idx.dump());
      }
      s |= subsets::singleton(idx.get<std::size_t>());
    }
    const json& value = field(focal[f], "mass", where);
    if (!value.is_number()) throw ParseError(where + ".mass: expected a number");
    masses[s] += value.get<double>();
  }
  return MassFunction(ProductFrame(Frame(n, "X1")), std::move(masses));
}

MassFunction read_mass(const std::filesystem::path& path) { return parse_mass(read_file(path)); }

}  // namespace credal
