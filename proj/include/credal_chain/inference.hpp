#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "credal_chain/chain.hpp"
#include "credal_chain/interval.hpp"
#include "credal_chain/mass.hpp"

namespace credal {

enum class Strategy {
  kSgmUniformFix,  // standard good mass, bad intervals fixed by fix_uniform
  kSgmAdhocFix,    // standard good mass, bad intervals fixed per target state
  kAdhocMass,      // LP-optimal mass per target state and side
  kFullMass,       // keep the whole marginal mass, never revert to an interval
};

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view name);

// ---------------------------------------------------------------- one step

struct StepBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t multiplications = 0;
};

// Closed-form child bounds for a parent mass and per-parent-state
// conditional bounds:
//   lower[j] = sum_V m(V) prod_{i in V} cond.lower[i][j]
//   upper[j] = 1 - sum_V m(V) prod_{i in V} (1 - cond.upper[i][j])
// Conditional rows need not be good.
StepBounds closed_form_step(const MassFunction& parent, const ConditionalBounds& cond);

// Single entries of the above for one column of coefficients
// (cond.lower[.][j], or 1 - cond.upper[.][j] for the upper side, where the
// bound is 1 minus the returned value). Adds to *multiplications if given.
double belief_mixture(const MassFunction& parent, std::span<const double> column,
                      std::size_t* multiplications = nullptr);

// Sets V with |V| >= 2 whose coefficient product exceeds the second smallest
// coefficient. An ad-hoc mass must leave them empty.
std::vector<Subset> forbidden_sets(std::span<const double> coefficients);

struct AdhocMassStep {
  std::vector<double> lower;
  std::vector<double> upper;
  // Optimal masses per target state, one for each side.
  std::vector<MassFunction> lower_masses;
  std::vector<MassFunction> upper_masses;
  // Widening applied when the parent interval was not representable (0 if none).
  std::vector<double> lower_epsilon;
  std::vector<double> upper_epsilon;
  // Duality gaps of the optimal LPs.
  std::vector<double> lower_gap;
  std::vector<double> upper_gap;
};

// For every target state j, maximizes sum_V m(V) prod_{i in V} c_i over the
// masses matching the parent interval on the singletons with the forbidden
// sets left empty; c is the lower column for the lower bound and
// 1 - upper column for the upper bound (whose bound is then 1 - optimum).
// An infeasible program triggers representability_repair and a re-solve.
AdhocMassStep adhoc_mass_step(const ProbabilityInterval& parent, const ConditionalBounds& cond);

// Marginal mass on the child of parent (x) m_{child|parent}, computed as
// bel_child(T) = sum_V m(V) prod_{i in V} bel_i(T) followed by the Möbius
// inverse.
MassFunction full_mass_step(const MassFunction& parent, std::span<const MassFunction> conditionals,
                            const Frame& child);

// ---------------------------------------------------------------- chains

struct StepDiagnostics {
  // Goodness of the interval entering the step (NaN under kFullMass and when
  // an explicit prior mass is used).
  double parent_delta = 0.0;
  bool parent_fixed = false;
  // kSgmUniformFix: amount added to each upper bound of the parent.
  std::vector<double> uniform_fix;
  // kSgmAdhocFix: per target state, the fix used for its lower/upper bound.
  std::vector<std::vector<double>> lower_fix;
  std::vector<std::vector<double>> upper_fix;
  // kAdhocMass: widening applied per target state and side.
  std::vector<double> lower_epsilon;
  std::vector<double> upper_epsilon;
  // Bounds assembled from several masses can be incoherent; they are then
  // replaced by their coherent closure.
  bool closure_applied = false;
  std::size_t multiplications = 0;
};

struct InferenceResult {
  std::size_t node = 0;  // 1-based
  Strategy method = Strategy::kSgmUniformFix;
  std::vector<double> lower;
  std::vector<double> upper;
  StepDiagnostics diagnostics;

  ProbabilityInterval interval(const Frame& frame) const;
  double mean_width() const;
};

// Belief inference along the chain, one result per node 2..k. With
// `prior_mass` the first step uses that mass instead of one derived from the
// prior interval.
std::vector<InferenceResult> propagate_chain(const ChainModel& chain, Strategy strategy,
                                             const std::optional<MassFunction>& prior_mass = {});

}  // namespace credal
