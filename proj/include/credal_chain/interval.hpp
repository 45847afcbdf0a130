#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credal_chain/frame.hpp"

namespace credal {

// Absolute tolerance for checks on user-supplied numbers.
inline constexpr double kInputTolerance = 1e-9;
// Absolute tolerance for quantities this library constructs itself.
inline constexpr double kInternalTolerance = 1e-12;

// Per-state lower/upper probability bounds over a frame.
//
// Construction enforces the type invariants only (matching lengths, values
// in [0, 1], lower <= upper). Coherence is a separate question answered by
// validate_coherence().
class ProbabilityInterval {
 public:
  ProbabilityInterval(Frame frame, std::vector<double> lower, std::vector<double> upper);
  // Anonymous frame with default labels.
  ProbabilityInterval(std::vector<double> lower, std::vector<double> upper);

  static ProbabilityInterval precise(std::vector<double> probabilities);
  static ProbabilityInterval vacuous(std::size_t n);

  const Frame& frame() const { return frame_; }
  std::size_t size() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double lower(std::size_t i) const { return lower_.at(i); }
  double upper(std::size_t i) const { return upper_.at(i); }
  double width(std::size_t i) const { return upper_.at(i) - lower_.at(i); }
  double mean_width() const;
  double sum_lower() const;
  double sum_upper() const;

  bool operator==(const ProbabilityInterval&) const = default;

 private:
  void validate();

  Frame frame_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

enum class CoherenceCondition { kCoh1, kCoh2, kCoh3 };

struct CoherenceViolation {
  CoherenceCondition condition;
  // State index for per-state conditions; empty for the sum conditions.
  std::optional<std::size_t> index;
  std::string detail;
};

struct CoherenceVerdict {
  std::vector<CoherenceViolation> violations;

  bool coherent() const { return violations.empty(); }
  bool violates(CoherenceCondition c) const;
};

// [Coh1] sum(lower) <= 1 <= sum(upper)
// [Coh2] lower[i] >= 1 - sum_{h != i} upper[h]
// [Coh3] upper[i] <= 1 - sum_{h != i} lower[h]
CoherenceVerdict validate_coherence(const ProbabilityInterval& interval,
                                    double tolerance = kInputTolerance);

bool is_coherent(const ProbabilityInterval& interval, double tolerance = kInputTolerance);

struct GoodnessReport {
  double sum_lower = 0.0;
  double sum_upper = 0.0;
  // sum_upper + (n - 2) * sum_lower - (n - 1); the interval is good iff >= 0.
  double delta = 0.0;
  // slack[i] = 1 - sum_lower - (upper[i] - lower[i]): how far upper[i] can
  // grow before [Coh3] breaks.
  std::vector<double> slack;

  bool good() const { return delta >= -kInternalTolerance; }
};

// Throws DomainError for an incoherent interval.
GoodnessReport goodness(const ProbabilityInterval& interval);

bool is_good(const ProbabilityInterval& interval);

struct SetBounds {
  double bel = 0.0;
  double pl = 0.0;
};

// Tightest lower/upper probability of `subset` implied by a coherent interval.
SetBounds natural_extension(const ProbabilityInterval& interval, Subset subset);

// Interval with the same lower bounds and enlarged upper bounds.
struct FixedInterval {
  ProbabilityInterval interval;
  // Amount added to each upper bound.
  std::vector<double> added;
};

// Spreads -delta over the upper bounds in proportion to the slack.
// Good intervals come back unchanged.
FixedInterval fix_uniform(const ProbabilityInterval& interval);

// Spreads -delta over the upper bounds so that sum_i added[i] * coeffs[i] is
// minimal (see allocate_greedy). Good intervals come back unchanged.
FixedInterval fix_adhoc(const ProbabilityInterval& interval, std::span<const double> coeffs);

// argmin sum_i t[i] * coeffs[i] subject to 0 <= t[i] <= caps[i],
// sum_i t[i] = total. Fills the cheapest entries first; ties go to the lower
// index. Throws InfeasibleError if sum(caps) < total.
std::vector<double> allocate_greedy(std::span<const double> coeffs, std::span<const double> caps,
                                    double total);

// Coherent closure: upper[i] <- min(upper[i], 1 - sum_{h != i} lower[h]) and
// lower[i] <- max(lower[i], 1 - sum_{h != i} upper[h]), both evaluated on the
// input. Requires sum(lower) <= 1 <= sum(upper). The result describes the
// same credal set and is coherent.
ProbabilityInterval coherent_closure(const ProbabilityInterval& interval);

}  // namespace credal
