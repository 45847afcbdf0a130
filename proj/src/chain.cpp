#include "credal_chain/chain.hpp"

#include "credal_chain/errors.hpp"

namespace credal {

std::vector<double> ConditionalBounds::lower_column(std::size_t j) const {
  std::vector<double> col(parents());
  for (std::size_t i = 0; i < parents(); ++i) col[i] = lower[i].at(j);
  return col;
}

std::vector<double> ConditionalBounds::upper_column(std::size_t j) const {
  std::vector<double> col(parents());
  for (std::size_t i = 0; i < parents(); ++i) col[i] = upper[i].at(j);
  return col;
}

namespace {

std::vector<Frame> default_frames(const ProbabilityInterval& prior,
                                  const std::vector<std::vector<ProbabilityInterval>>& links) {
  std::vector<Frame> frames{Frame(prior.size(), "X1")};
  for (std::size_t l = 0; l < links.size(); ++l) {
    if (links[l].empty()) throw StructuralError("chain: link " + std::to_string(l + 1) + " is empty");
    frames.emplace_back(links[l].front().size(), "X" + std::to_string(l + 2));
  }
  return frames;
}

}  // namespace

ChainModel::ChainModel(std::vector<Frame> frames, ProbabilityInterval prior,
                       std::vector<std::vector<ProbabilityInterval>> links)
    : frames_(std::move(frames)), prior_(std::move(prior)), links_(std::move(links)) {
  if (frames_.size() < 2) throw StructuralError("chain: need at least two nodes");
  if (links_.size() + 1 != frames_.size()) {
    throw StructuralError("chain: " + std::to_string(frames_.size()) + " nodes need " +
                          std::to_string(frames_.size() - 1) + " links");
  }
  if (prior_.size() != frames_[0].size()) throw StructuralError("chain: prior size mismatch");
  if (!is_coherent(prior_)) throw DomainError("chain: prior interval is not coherent");
  for (std::size_t l = 0; l < links_.size(); ++l) {
    if (links_[l].size() != frames_[l].size()) {
      throw StructuralError("chain: link " + std::to_string(l + 1) + " needs one interval per state of " +
                            frames_[l].name());
    }
    for (std::size_t i = 0; i < links_[l].size(); ++i) {
      if (links_[l][i].size() != frames_[l + 1].size()) {
        throw StructuralError("chain: link " + std::to_string(l + 1) + " interval " +
                              std::to_string(i) + " has the wrong length");
      }
      if (!is_coherent(links_[l][i])) {
        throw DomainError("chain: link " + std::to_string(l + 1) + " interval " +
                          std::to_string(i) + " is not coherent");
      }
    }
  }
  // Rebind every interval to its node frame.
  prior_ = ProbabilityInterval(frames_[0], prior_.lower(), prior_.upper());
  for (std::size_t l = 0; l < links_.size(); ++l) {
    for (auto& iv : links_[l]) iv = ProbabilityInterval(frames_[l + 1], iv.lower(), iv.upper());
  }
}

ChainModel::ChainModel(ProbabilityInterval prior,
                       std::vector<std::vector<ProbabilityInterval>> links)
    : ChainModel(default_frames(prior, links), prior, links) {}

ConditionalBounds ChainModel::bounds(std::size_t l) const {
  ConditionalBounds b;
  for (const auto& interval : links_.at(l)) {
    b.lower.push_back(interval.lower());
    b.upper.push_back(interval.upper());
  }
  return b;
}

double NodeBounds::mean_width() const {
  double total = 0.0;
  for (std::size_t j = 0; j < lower.size(); ++j) total += upper[j] - lower[j];
  return lower.empty() ? 0.0 : total / static_cast<double>(lower.size());
}

}  // namespace credal
