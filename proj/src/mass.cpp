#include "credal_chain/mass.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "credal_chain/errors.hpp"

namespace credal {

namespace {

constexpr double kMassSumTolerance = 1e-9;
constexpr double kNegativeMassTolerance = 1e-9;
constexpr double kZeroCoefficient = 1e-12;
constexpr std::size_t kMaxTableStates = 20;
constexpr std::size_t kMaxMobiusStates = 16;

void require_nonempty(Subset s, const char* op) {
  if (s == 0) throw DomainError(std::string(op) + ": empty subset");
}

}  // namespace

// ---------------------------------------------------------------- ProductFrame

ProductFrame::ProductFrame(std::vector<Frame> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw StructuralError("product frame needs at least one factor");
  num_states_ = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (factors_[i] == factors_[j]) {
        throw StructuralError("product frame: factor '" + factors_[i].name() +
                              "' appears twice");
      }
    }
    num_states_ *= factors_[i].size();
    if (num_states_ > kMaxStates) {
      throw StructuralError("product frame exceeds 64 states");
    }
  }
}

ProductFrame::ProductFrame(const Frame& frame) : ProductFrame(std::vector<Frame>{frame}) {}

std::vector<std::size_t> ProductFrame::coordinates(std::size_t state) const {
  std::vector<std::size_t> coords(factors_.size());
  for (std::size_t f = factors_.size(); f-- > 0;) {
    coords[f] = state % factors_[f].size();
    state /= factors_[f].size();
  }
  return coords;
}

std::size_t ProductFrame::state(std::span<const std::size_t> coordinates) const {
  if (coordinates.size() != factors_.size()) throw StructuralError("state: coordinate count");
  std::size_t s = 0;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (coordinates[f] >= factors_[f].size()) throw StructuralError("state: coordinate range");
    s = s * factors_[f].size() + coordinates[f];
  }
  return s;
}

std::optional<std::size_t> ProductFrame::find(const Frame& frame) const {
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (factors_[f] == frame) return f;
  }
  return std::nullopt;
}

ProductFrame ProductFrame::sub_frame(std::span<const std::size_t> keep) const {
  std::vector<Frame> kept;
  for (std::size_t f : keep) {
    if (f >= factors_.size()) {
      throw StructuralError("factor index " + std::to_string(f) + " out of range");
    }
    kept.push_back(factors_[f]);
  }
  return ProductFrame(std::move(kept));
}

Subset ProductFrame::project(Subset subset, std::span<const std::size_t> keep) const {
  const ProductFrame target = sub_frame(keep);
  std::vector<std::size_t> sub(keep.size());
  Subset out = 0;
  for (std::size_t s : subsets::members(subset)) {
    if (s >= num_states_) throw StructuralError("project: subset has states outside the frame");
    const auto coords = coordinates(s);
    for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = coords[keep[k]];
    out |= subsets::singleton(target.state(sub));
  }
  return out;
}

// ---------------------------------------------------------------- MassFunction

MassFunction::MassFunction(ProductFrame frame, std::map<Subset, double> masses)
    : frame_(std::move(frame)) {
  const Subset full = frame_.full_set();
  double total = 0.0;
  for (const auto& [set, value] : masses) {
    if (!std::isfinite(value)) throw DomainError("mass function: non-finite mass");
    if (value < -kInternalTolerance) {
      throw DomainError("mass function: negative mass " + std::to_string(value) + " on " +
                        subsets::to_binary(set, frame_.num_states()));
    }
    if (value <= 0.0) continue;
    if (set == 0) throw DomainError("mass function: the empty set carries mass");
    if (!subsets::is_subset(set, full)) {
      throw StructuralError("mass function: focal set has states outside the frame");
    }
    masses_.emplace(set, value);
    total += value;
  }
  if (std::abs(total - 1.0) > kMassSumTolerance) {
    throw DomainError("mass function: masses sum to " + std::to_string(total));
  }
}

MassFunction MassFunction::vacuous(ProductFrame frame) {
  const Subset full = frame.full_set();
  return MassFunction(std::move(frame), {{full, 1.0}});
}

MassFunction MassFunction::deterministic(ProductFrame frame, Subset focal) {
  return MassFunction(std::move(frame), {{focal, 1.0}});
}

MassFunction MassFunction::bayesian(const Frame& frame, std::span<const double> probabilities) {
  if (probabilities.size() != frame.size()) throw StructuralError("bayesian: length mismatch");
  std::map<Subset, double> masses;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    masses[subsets::singleton(i)] = probabilities[i];
  }
  return MassFunction(ProductFrame(frame), std::move(masses));
}

double MassFunction::mass(Subset subset) const {
  const auto it = masses_.find(subset);
  return it == masses_.end() ? 0.0 : it->second;
}

double MassFunction::total() const {
  double t = 0.0;
  for (const auto& [set, value] : masses_) t += value;
  return t;
}

bool MassFunction::is_vacuous() const {
  return masses_.size() == 1 && masses_.begin()->first == frame_.full_set();
}

bool MassFunction::is_deterministic() const { return masses_.size() == 1; }

bool MassFunction::is_bayesian() const {
  for (const auto& [set, value] : masses_) {
    if (subsets::cardinality(set) != 1) return false;
  }
  return true;
}

std::string MassFunction::debug_string() const {
  std::string out;
  char buf[64];
  for (const auto& [set, value] : masses_) {
    std::snprintf(buf, sizeof buf, "%.12g", value);
    out += subsets::to_binary(set, frame_.num_states());
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- bel / pl

double bel(const MassFunction& m, Subset subset) {
  require_nonempty(subset, "bel");
  double total = 0.0;
  for (const auto& [set, value] : m.focal_sets()) {
    if (subsets::is_subset(set, subset)) total += value;
  }
  return total;
}

double pl(const MassFunction& m, Subset subset) {
  require_nonempty(subset, "pl");
  double total = 0.0;
  for (const auto& [set, value] : m.focal_sets()) {
    if ((set & subset) != 0) total += value;
  }
  return total;
}

std::vector<double> belief_table(const MassFunction& m) {
  const std::size_t n = m.frame().num_states();
  if (n > kMaxTableStates) throw StructuralError("belief_table: frame too large");
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (const auto& [set, value] : m.focal_sets()) table[set] += value;
  // Zeta transform over the subset lattice.
  for (std::size_t bit = 0; bit < n; ++bit) {
    const Subset b = subsets::singleton(bit);
    for (Subset s = 0; s < table.size(); ++s) {
      if (s & b) table[s] += table[s ^ b];
    }
  }
  return table;
}

MobiusResult mobius_inverse(std::span<const double> bel_values, const ProductFrame& frame) {
  const std::size_t n = frame.num_states();
  if (n > kMaxMobiusStates) throw StructuralError("mobius_inverse: frame too large");
  const std::size_t count = std::size_t{1} << n;
  if (bel_values.size() != count) {
    throw StructuralError("mobius_inverse: expected " + std::to_string(count) + " values");
  }
  if (std::abs(bel_values[0]) > kInputTolerance) {
    throw DomainError("mobius_inverse: bel(empty set) must be 0");
  }
  if (std::abs(bel_values[count - 1] - 1.0) > kInputTolerance) {
    throw DomainError("mobius_inverse: bel(full set) must be 1");
  }

  MobiusResult result;
  std::map<Subset, double> masses;
  for (Subset v = 1; v < count; ++v) {
    double m = 0.0;
    // All submasks of v, including v itself and the empty set.
    for (Subset w = v;; w = (w - 1) & v) {
      const bool odd = subsets::cardinality(v ^ w) % 2 == 1;
      m += odd ? -bel_values[w] : bel_values[w];
      if (w == 0) break;
    }
    if (std::abs(m) <= kZeroCoefficient) continue;
    if (m < result.most_negative_value) {
      result.most_negative_value = m;
      result.most_negative_set = v;
    }
    if (m > 0.0) masses.emplace(v, m);
  }
  if (result.most_negative_value < -kNegativeMassTolerance) return result;
  result.mass.emplace(frame, std::move(masses));
  return result;
}

// ---------------------------------------------------------------- extension

namespace {

// For each state of `target`, its index in the sub-frame spanned by `positions`.
std::vector<std::size_t> projection_index(const ProductFrame& target,
                                          std::span<const std::size_t> positions) {
  const ProductFrame sub = target.sub_frame(positions);
  std::vector<std::size_t> index(target.num_states());
  std::vector<std::size_t> coords_sub(positions.size());
  for (std::size_t s = 0; s < target.num_states(); ++s) {
    const auto coords = target.coordinates(s);
    for (std::size_t k = 0; k < positions.size(); ++k) coords_sub[k] = coords[positions[k]];
    index[s] = sub.state(coords_sub);
  }
  return index;
}

}  // namespace

MassFunction vacuous_extend(const MassFunction& m, const ProductFrame& target) {
  std::vector<std::size_t> positions;
  for (const Frame& f : m.frame().factors()) {
    const auto pos = target.find(f);
    if (!pos) {
      throw StructuralError("vacuous_extend: factor '" + f.name() +
                            "' is not part of the target frame");
    }
    positions.push_back(*pos);
  }
  const auto index = projection_index(target, positions);
  std::map<Subset, double> masses;
  for (const auto& [set, value] : m.focal_sets()) {
    Subset cylinder = 0;
    for (std::size_t s = 0; s < target.num_states(); ++s) {
      if (subsets::contains(set, index[s])) cylinder |= subsets::singleton(s);
    }
    masses[cylinder] += value;
  }
  return MassFunction(target, std::move(masses));
}

MassFunction marginalize(const MassFunction& m, std::span<const std::size_t> keep) {
  const ProductFrame& frame = m.frame();
  const ProductFrame target = frame.sub_frame(keep);
  const auto index = projection_index(frame, keep);
  std::map<Subset, double> masses;
  for (const auto& [set, value] : m.focal_sets()) {
    Subset projected = 0;
    for (std::size_t s : subsets::members(set)) projected |= subsets::singleton(index[s]);
    masses[projected] += value;
  }
  return MassFunction(target, std::move(masses));
}

MassFunction marginalize(const MassFunction& m, std::size_t factor) {
  const std::size_t keep[] = {factor};
  return marginalize(m, keep);
}

// ---------------------------------------------------------------- Dempster

Combination combine_dempster(const MassFunction& m1, const MassFunction& m2) {
  if (!(m1.frame() == m2.frame())) {
    std::vector<Frame> factors = m1.frame().factors();
    for (const Frame& f : m2.frame().factors()) {
      if (!m1.frame().find(f)) factors.push_back(f);
    }
    const ProductFrame joint(std::move(factors));
    return combine_dempster(vacuous_extend(m1, joint), vacuous_extend(m2, joint));
  }
  std::map<Subset, double> acc;
  double conflict = 0.0;
  for (const auto& [s1, v1] : m1.focal_sets()) {
    for (const auto& [s2, v2] : m2.focal_sets()) {
      const Subset meet = s1 & s2;
      if (meet == 0) {
        conflict += v1 * v2;
      } else {
        acc[meet] += v1 * v2;
      }
    }
  }
  if (1.0 - conflict <= kInternalTolerance) {
    throw TotalConflictError("combine_dempster: operands are in total conflict");
  }
  if (conflict > 0.0) {
    const double scale = 1.0 / (1.0 - conflict);
    for (auto& [set, value] : acc) value *= scale;
  }
  return {MassFunction(m1.frame(), std::move(acc)), conflict};
}

// ---------------------------------------------------------------- intervals

MassFunction sgm_from_interval(const ProbabilityInterval& interval) {
  const GoodnessReport report = goodness(interval);
  if (!report.good()) {
    throw DomainError("sgm_from_interval: interval is bad (delta = " +
                      std::to_string(report.delta) + "); fix it first");
  }
  const std::size_t n = interval.size();
  const Subset full = subsets::full(n);
  std::map<Subset, double> masses;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = interval.lower(i);
    masses[subsets::singleton(i)] += lo;
    // 1 - upper[i] - sum_{h != i} lower[h], i.e. slack[i] on the original scale.
    const double co = 1.0 - interval.upper(i) - (report.sum_lower - lo);
    masses[full & ~subsets::singleton(i)] += std::max(co, 0.0);
  }
  masses[full] += std::max(report.delta, 0.0);
  return MassFunction(ProductFrame(interval.frame()), std::move(masses));
}

ProbabilityInterval interval_from_mass(const MassFunction& m) {
  if (m.frame().num_factors() != 1) {
    throw StructuralError("interval_from_mass: mass must live on a single frame");
  }
  const Frame& frame = m.frame().factor(0);
  std::vector<double> lower(frame.size(), 0.0), upper(frame.size(), 0.0);
  for (const auto& [set, value] : m.focal_sets()) {
    if (subsets::cardinality(set) == 1) lower[static_cast<std::size_t>(std::countr_zero(set))] += value;
    for (std::size_t i : subsets::members(set)) upper[i] += value;
  }
  return ProbabilityInterval(frame, std::move(lower), std::move(upper));
}

}  // namespace credal
