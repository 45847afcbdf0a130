#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace credal {

// Subsets of a frame (or of a product frame) are bitmasks: bit i set means
// state i belongs to the subset. This caps a frame at 64 states.
using Subset = std::uint64_t;

inline constexpr std::size_t kMaxStates = 64;

namespace subsets {

constexpr Subset singleton(std::size_t i) { return Subset{1} << i; }

constexpr Subset full(std::size_t n) {
  return n >= 64 ? ~Subset{0} : (Subset{1} << n) - 1;
}

constexpr bool contains(Subset s, std::size_t i) { return (s >> i) & 1U; }

constexpr bool is_subset(Subset inner, Subset outer) {
  return (inner & ~outer) == 0;
}

constexpr std::size_t cardinality(Subset s) {
  return static_cast<std::size_t>(std::popcount(s));
}

constexpr Subset complement(Subset s, std::size_t n) { return full(n) & ~s; }

std::vector<std::size_t> members(Subset s);

// Most significant state first, exactly n characters.
std::string to_binary(Subset s, std::size_t n);

}  // namespace subsets

// A finite, labeled state space. The optional name identifies the variable
// when frames are combined into product frames.
class Frame {
 public:
  explicit Frame(std::size_t n, std::string name = {});
  Frame(std::string name, std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  Subset full_set() const { return subsets::full(size()); }

  bool operator==(const Frame& other) const = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

}  // namespace credal
