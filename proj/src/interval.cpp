#include "credal_chain/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "credal_chain/errors.hpp"

namespace credal {

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require_coherent(const ProbabilityInterval& interval, const char* op) {
  if (!is_coherent(interval)) {
    throw DomainError(std::string(op) + ": interval is not coherent");
  }
}

}  // namespace

ProbabilityInterval::ProbabilityInterval(Frame frame, std::vector<double> lower,
                                         std::vector<double> upper)
    : frame_(std::move(frame)), lower_(std::move(lower)), upper_(std::move(upper)) {
  validate();
}

void ProbabilityInterval::validate() {
  if (lower_.size() != upper_.size() || lower_.size() != frame_.size()) {
    throw StructuralError("interval: lower/upper/frame lengths differ (" +
                          std::to_string(lower_.size()) + "/" + std::to_string(upper_.size()) +
                          "/" + std::to_string(frame_.size()) + ")");
  }
  if (lower_.size() < 2) throw StructuralError("interval: frame needs at least two states");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    double& lo = lower_[i];
    double& up = upper_[i];
    if (!std::isfinite(lo) || !std::isfinite(up)) {
      throw DomainError("interval: non-finite bound at state " + std::to_string(i));
    }
    if (lo < -kInputTolerance || up > 1.0 + kInputTolerance || lo > up + kInputTolerance) {
      throw DomainError("interval: state " + std::to_string(i) + " has bounds [" + fmt(lo) +
                        ", " + fmt(up) + "] outside 0 <= lower <= upper <= 1");
    }
    lo = std::clamp(lo, 0.0, 1.0);
    up = std::clamp(up, 0.0, 1.0);
  }
}

ProbabilityInterval::ProbabilityInterval(std::vector<double> lower, std::vector<double> upper)
    : frame_(lower.size()), lower_(std::move(lower)), upper_(std::move(upper)) {
  validate();
}

ProbabilityInterval ProbabilityInterval::precise(std::vector<double> probabilities) {
  auto copy = probabilities;
  return ProbabilityInterval(std::move(probabilities), std::move(copy));
}

ProbabilityInterval ProbabilityInterval::vacuous(std::size_t n) {
  return ProbabilityInterval(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));
}

double ProbabilityInterval::mean_width() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += upper_[i] - lower_[i];
  return total / static_cast<double>(size());
}

double ProbabilityInterval::sum_lower() const { return sum(lower_); }
double ProbabilityInterval::sum_upper() const { return sum(upper_); }

bool CoherenceVerdict::violates(CoherenceCondition c) const {
  return std::any_of(violations.begin(), violations.end(),
                     [c](const CoherenceViolation& v) { return v.condition == c; });
}

CoherenceVerdict validate_coherence(const ProbabilityInterval& interval, double tolerance) {
  CoherenceVerdict verdict;
  const auto& lo = interval.lower();
  const auto& up = interval.upper();
  const double s_lo = interval.sum_lower();
  const double s_up = interval.sum_upper();

  if (s_lo > 1.0 + tolerance) {
    verdict.violations.push_back(
        {CoherenceCondition::kCoh1, std::nullopt, "sum of lower bounds " + fmt(s_lo) + " > 1"});
  }
  if (s_up < 1.0 - tolerance) {
    verdict.violations.push_back(
        {CoherenceCondition::kCoh1, std::nullopt, "sum of upper bounds " + fmt(s_up) + " < 1"});
  }
  for (std::size_t i = 0; i < interval.size(); ++i) {
    const double floor = 1.0 - (s_up - up[i]);
    if (lo[i] < floor - tolerance) {
      verdict.violations.push_back({CoherenceCondition::kCoh2, i,
                                    "lower " + fmt(lo[i]) + " < 1 - sum of other uppers " +
                                        fmt(floor)});
    }
  }
  for (std::size_t i = 0; i < interval.size(); ++i) {
    const double ceiling = 1.0 - (s_lo - lo[i]);
    if (up[i] > ceiling + tolerance) {
      verdict.violations.push_back({CoherenceCondition::kCoh3, i,
                                    "upper " + fmt(up[i]) + " > 1 - sum of other lowers " +
                                        fmt(ceiling)});
    }
  }
  return verdict;
}

bool is_coherent(const ProbabilityInterval& interval, double tolerance) {
  return validate_coherence(interval, tolerance).coherent();
}

GoodnessReport goodness(const ProbabilityInterval& interval) {
  require_coherent(interval, "goodness");
  GoodnessReport report;
  const double n = static_cast<double>(interval.size());
  report.sum_lower = interval.sum_lower();
  report.sum_upper = interval.sum_upper();
  report.delta = report.sum_upper + (n - 2.0) * report.sum_lower - (n - 1.0);
  report.slack.resize(interval.size());
  for (std::size_t i = 0; i < interval.size(); ++i) {
    report.slack[i] = 1.0 - report.sum_lower - interval.width(i);
  }
  return report;
}

bool is_good(const ProbabilityInterval& interval) { return goodness(interval).good(); }

SetBounds natural_extension(const ProbabilityInterval& interval, Subset subset) {
  const std::size_t n = interval.size();
  if (subset == 0) throw DomainError("natural_extension: empty subset");
  if (!subsets::is_subset(subset, subsets::full(n))) {
    throw StructuralError("natural_extension: subset has states outside the frame");
  }
  require_coherent(interval, "natural_extension");
  double lo_in = 0.0, up_in = 0.0, lo_out = 0.0, up_out = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (subsets::contains(subset, i)) {
      lo_in += interval.lower(i);
      up_in += interval.upper(i);
    } else {
      lo_out += interval.lower(i);
      up_out += interval.upper(i);
    }
  }
  return {std::max(lo_in, 1.0 - up_out), std::min(up_in, 1.0 - lo_out)};
}

std::vector<double> allocate_greedy(std::span<const double> coeffs, std::span<const double> caps,
                                    double total) {
  if (coeffs.size() != caps.size()) throw StructuralError("allocate_greedy: length mismatch");
  const double capacity = std::accumulate(caps.begin(), caps.end(), 0.0);
  if (total > capacity + kInternalTolerance) {
    throw InfeasibleError("allocate_greedy: need " + fmt(total) + " but slack totals " +
                          fmt(capacity));
  }
  std::vector<std::size_t> order(coeffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return coeffs[a] < coeffs[b]; });
  std::vector<double> t(coeffs.size(), 0.0);
  double remaining = std::max(total, 0.0);
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    t[i] = std::min(std::max(caps[i], 0.0), remaining);
    remaining -= t[i];
  }
  return t;
}

namespace {

FixedInterval apply_fix(const ProbabilityInterval& interval, std::vector<double> added) {
  std::vector<double> upper = interval.upper();
  for (std::size_t i = 0; i < upper.size(); ++i) upper[i] += added[i];
  return {ProbabilityInterval(interval.frame(), interval.lower(), std::move(upper)),
          std::move(added)};
}

}  // namespace

FixedInterval fix_uniform(const ProbabilityInterval& interval) {
  const GoodnessReport report = goodness(interval);
  if (report.delta >= 0.0) return {interval, std::vector<double>(interval.size(), 0.0)};
  const double need = -report.delta;
  const double capacity = std::accumulate(report.slack.begin(), report.slack.end(), 0.0);
  // capacity - need = 1 - sum_lower >= 0 for every coherent interval.
  if (capacity < need - kInternalTolerance) {
    throw InfeasibleError("fix_uniform: slack " + fmt(capacity) + " cannot absorb " + fmt(need));
  }
  std::vector<double> added(interval.size(), 0.0);
  if (capacity > 0.0) {
    const double share = std::min(need / capacity, 1.0);
    for (std::size_t i = 0; i < added.size(); ++i) {
      added[i] = std::max(report.slack[i], 0.0) * share;
    }
  }
  return apply_fix(interval, std::move(added));
}

FixedInterval fix_adhoc(const ProbabilityInterval& interval, std::span<const double> coeffs) {
  if (coeffs.size() != interval.size()) throw StructuralError("fix_adhoc: coefficient length");
  for (double c : coeffs) {
    if (!(c >= 0.0)) throw DomainError("fix_adhoc: coefficients must be nonnegative");
  }
  const GoodnessReport report = goodness(interval);
  if (report.delta >= 0.0) return {interval, std::vector<double>(interval.size(), 0.0)};
  std::vector<double> caps(report.slack.size());
  std::transform(report.slack.begin(), report.slack.end(), caps.begin(),
                 [](double r) { return std::max(r, 0.0); });
  return apply_fix(interval, allocate_greedy(coeffs, caps, -report.delta));
}

ProbabilityInterval coherent_closure(const ProbabilityInterval& interval) {
  const double s_lo = interval.sum_lower();
  const double s_up = interval.sum_upper();
  if (s_lo > 1.0 + kInputTolerance || s_up < 1.0 - kInputTolerance) {
    throw DomainError("coherent_closure: bounds admit no distribution");
  }
  std::vector<double> lower(interval.size()), upper(interval.size());
  for (std::size_t i = 0; i < interval.size(); ++i) {
    lower[i] = std::max(interval.lower(i), 1.0 - (s_up - interval.upper(i)));
    upper[i] = std::min(interval.upper(i), 1.0 - (s_lo - interval.lower(i)));
    lower[i] = std::clamp(lower[i], 0.0, 1.0);
    upper[i] = std::clamp(upper[i], lower[i], 1.0);
  }
  return ProbabilityInterval(interval.frame(), std::move(lower), std::move(upper));
}

}  // namespace credal
