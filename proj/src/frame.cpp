#include "credal_chain/frame.hpp"

#include <set>

#include "credal_chain/errors.hpp"

namespace credal {

namespace subsets {

std::vector<std::size_t> members(Subset s) {
  std::vector<std::size_t> out;
  out.reserve(cardinality(s));
  while (s != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(s)));
    s &= s - 1;
  }
  return out;
}

std::string to_binary(Subset s, std::size_t n) {
  std::string out(n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    if (contains(s, i)) out[n - 1 - i] = '1';
  }
  return out;
}

}  // namespace subsets

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
  return labels;
}

}  // namespace

Frame::Frame(std::size_t n, std::string name)
    : Frame(std::move(name), default_labels(n)) {}

Frame::Frame(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  if (labels_.empty()) throw StructuralError("frame must have at least one state");
  if (labels_.size() > kMaxStates) {
    throw StructuralError("frame has " + std::to_string(labels_.size()) +
                          " states; at most 64 are supported");
  }
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw StructuralError("frame labels must be distinct");
}

}  // namespace credal
