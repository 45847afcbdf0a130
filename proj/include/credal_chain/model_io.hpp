#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "credal_chain/chain.hpp"
#include "credal_chain/interval.hpp"
#include "credal_chain/mass.hpp"

namespace credal {

// Chain model as written in a model file, before coherence checks.
//
//   {"states": [n1, ..., nk],
//    "prior": {"lower": [...], "upper": [...]},
//    "links": [[{"lower": [...], "upper": [...]}, ... one per parent state], ...]}
//
// An optional "labels": [[...], ...] names the states of each node.
struct ModelFile {
  std::vector<Frame> frames;
  ProbabilityInterval prior;
  std::vector<std::vector<ProbabilityInterval>> links;

  ChainModel chain() const;
};

// Syntax and schema problems throw ParseError (with the byte offset for
// syntax errors); value problems such as lower > upper throw DomainError.
ModelFile parse_model(std::string_view text);
ModelFile read_model(const std::filesystem::path& path);

std::string format_model(const ChainModel& chain);
std::string format_interval(const ProbabilityInterval& interval);

// {"states": n, "focal": [{"set": [0, 1], "mass": 0.1}, ...]}
MassFunction parse_mass(std::string_view text);
MassFunction read_mass(const std::filesystem::path& path);

}  // namespace credal
