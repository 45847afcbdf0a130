#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credal_chain/frame.hpp"
#include "credal_chain/interval.hpp"

namespace credal {

// Cartesian product of frames. States are numbered row-major: the first
// factor varies slowest, so for parent x child the state (a, b) is
// a * |child| + b. A single-factor product frame is just that frame.
class ProductFrame {
 public:
  explicit ProductFrame(std::vector<Frame> factors);
  ProductFrame(const Frame& frame);  // NOLINT(google-explicit-constructor)

  std::size_t num_factors() const { return factors_.size(); }
  const std::vector<Frame>& factors() const { return factors_; }
  const Frame& factor(std::size_t i) const { return factors_.at(i); }
  std::size_t num_states() const { return num_states_; }
  Subset full_set() const { return subsets::full(num_states_); }

  std::vector<std::size_t> coordinates(std::size_t state) const;
  std::size_t state(std::span<const std::size_t> coordinates) const;

  // Position of `frame` among the factors, if present.
  std::optional<std::size_t> find(const Frame& frame) const;

  // Frame made of the listed factors, in the listed order.
  ProductFrame sub_frame(std::span<const std::size_t> keep) const;

  // Projection of a subset onto the listed factors.
  Subset project(Subset subset, std::span<const std::size_t> keep) const;

  bool operator==(const ProductFrame&) const = default;

 private:
  std::vector<Frame> factors_;
  std::size_t num_states_ = 0;
};

// Nonnegative masses on nonempty subsets, summing to one. Stored sparsely,
// iterated in ascending mask order.
class MassFunction {
 public:
  // Validates: no mass on the empty set, masses >= 0, total 1 within 1e-9.
  // Entries that are zero (or negative within 1e-12) are dropped.
  MassFunction(ProductFrame frame, std::map<Subset, double> masses);

  static MassFunction vacuous(ProductFrame frame);
  static MassFunction deterministic(ProductFrame frame, Subset focal);
  static MassFunction bayesian(const Frame& frame, std::span<const double> probabilities);

  const ProductFrame& frame() const { return frame_; }
  const std::map<Subset, double>& focal_sets() const { return masses_; }
  std::size_t num_focal_sets() const { return masses_.size(); }
  double mass(Subset subset) const;
  double total() const;

  bool is_vacuous() const;
  bool is_deterministic() const;
  bool is_bayesian() const;

  // One line per focal set, `mask_as_binary<TAB>mass`, ascending mask order.
  std::string debug_string() const;

 private:
  ProductFrame frame_;
  std::map<Subset, double> masses_;
};

// Throw DomainError on an empty subset.
double bel(const MassFunction& m, Subset subset);
double pl(const MassFunction& m, Subset subset);

// bel for all 2^N subsets of the frame, indexed by mask (bel[0] == 0).
std::vector<double> belief_table(const MassFunction& m);

struct MobiusResult {
  // Present when every Möbius coefficient is >= -1e-9.
  std::optional<MassFunction> mass;
  // Most negative coefficient and where it sits (0/0 when none is negative).
  Subset most_negative_set = 0;
  double most_negative_value = 0.0;

  bool is_belief() const { return mass.has_value(); }
};

// m(V) = sum_{W subset of V} (-1)^{|V \ W|} bel(W). `bel_values` holds one
// value per mask of the frame. Coefficients within 1e-12 of zero are treated
// as zero. Throws DomainError unless bel(empty) = 0 and bel(full) = 1.
MobiusResult mobius_inverse(std::span<const double> bel_values, const ProductFrame& frame);

struct Combination {
  MassFunction mass;
  double conflict = 0.0;
};

// Dempster's rule. Operands on different frames are first vacuously
// extended to the product of the factors of m1 followed by the factors of m2
// not already present. Throws TotalConflictError when conflict is 1.
Combination combine_dempster(const MassFunction& m1, const MassFunction& m2);

MassFunction marginalize(const MassFunction& m, std::size_t factor);
MassFunction marginalize(const MassFunction& m, std::span<const std::size_t> keep);

// Every factor of m's frame must appear in `target`.
MassFunction vacuous_extend(const MassFunction& m, const ProductFrame& target);

// Standard good mass: singletons get the lower bounds, E \ {a_i} gets
// 1 - upper[i] - sum_{h != i} lower[h], E gets delta. Requires a good
// coherent interval.
MassFunction sgm_from_interval(const ProbabilityInterval& interval);

// lower[i] = bel({a_i}), upper[i] = pl({a_i}). Single-factor frames only.
ProbabilityInterval interval_from_mass(const MassFunction& m);

}  // namespace credal
