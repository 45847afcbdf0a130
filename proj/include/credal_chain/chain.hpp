#pragma once

#include <vector>

#include "credal_chain/frame.hpp"
#include "credal_chain/interval.hpp"

namespace credal {

// Column-indexable bounds of one chain link: lower[i][j] and upper[i][j]
// bound P(child = j | parent = i).
struct ConditionalBounds {
  std::vector<std::vector<double>> lower;
  std::vector<std::vector<double>> upper;

  std::size_t parents() const { return lower.size(); }
  std::size_t children() const { return lower.empty() ? 0 : lower.front().size(); }
  std::vector<double> lower_column(std::size_t j) const;
  std::vector<double> upper_column(std::size_t j) const;
};

// Credal chain X_1 -> ... -> X_k with interval-valued local models.
class ChainModel {
 public:
  // links[l][i] is the interval for X_{l+2} given X_{l+1} = i. Validates
  // sizes and the coherence of every interval.
  ChainModel(std::vector<Frame> frames, ProbabilityInterval prior,
             std::vector<std::vector<ProbabilityInterval>> links);

  // Frames named X1..Xk with default labels.
  ChainModel(ProbabilityInterval prior, std::vector<std::vector<ProbabilityInterval>> links);

  std::size_t length() const { return frames_.size(); }
  const std::vector<Frame>& frames() const { return frames_; }
  const Frame& frame(std::size_t node) const { return frames_.at(node); }
  const ProbabilityInterval& prior() const { return prior_; }
  // link(l) holds the conditionals of X_{l+2} given X_{l+1}.
  const std::vector<ProbabilityInterval>& link(std::size_t l) const { return links_.at(l); }
  const std::vector<std::vector<ProbabilityInterval>>& links() const { return links_; }
  ConditionalBounds bounds(std::size_t l) const;

  bool operator==(const ChainModel&) const = default;

 private:
  std::vector<Frame> frames_;
  ProbabilityInterval prior_;
  std::vector<std::vector<ProbabilityInterval>> links_;
};

// Interval bounds on P(X_node = j) for every state j. `node` is 1-based.
struct NodeBounds {
  std::size_t node = 0;
  std::vector<double> lower;
  std::vector<double> upper;

  double mean_width() const;
};

}  // namespace credal
