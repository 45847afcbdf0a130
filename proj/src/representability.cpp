#include "credal_chain/representability.hpp"

#include <algorithm>
#include <map>

#include "credal_chain/errors.hpp"

namespace credal {

MassProgram build_mass_program(const ProbabilityInterval& interval,
                               std::span<const Subset> forbidden,
                               const std::function<double(Subset)>& objective) {
  const std::size_t n = interval.size();
  if (n > 16) throw StructuralError("mass program: frame too large");
  MassProgram mp;
  const Subset full = subsets::full(n);
  for (Subset v = 1; v <= full; ++v) {
    if (std::find(forbidden.begin(), forbidden.end(), v) != forbidden.end()) continue;
    mp.variables.push_back(v);
  }
  const std::size_t vars = mp.variables.size();
  auto& lp = mp.program;
  lp.objective.resize(vars);
  for (std::size_t k = 0; k < vars; ++k) lp.objective[k] = objective ? objective(mp.variables[k]) : 0.0;
  // Masses are nonnegative and sum to one, so the [0, 1] box is implied.
  lp.upper.assign(vars, lp::kInfinity);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(vars, 0.0);
    for (std::size_t k = 0; k < vars; ++k) {
      if (mp.variables[k] == subsets::singleton(i)) row[k] = 1.0;
    }
    lp.equalities.push_back(std::move(row));
    lp.rhs.push_back(interval.lower(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(vars, 0.0);
    for (std::size_t k = 0; k < vars; ++k) {
      if (subsets::contains(mp.variables[k], i)) row[k] = 1.0;
    }
    lp.equalities.push_back(std::move(row));
    lp.rhs.push_back(interval.upper(i));
  }
  lp.equalities.emplace_back(vars, 1.0);
  lp.rhs.push_back(1.0);
  return mp;
}

MassFunction mass_from_solution(const MassProgram& mp, const ProbabilityInterval& interval,
                                const std::vector<double>& x) {
  std::map<Subset, double> masses;
  double total = 0.0;
  for (std::size_t k = 0; k < mp.variables.size(); ++k) {
    if (x[k] > 0.0) {
      masses[mp.variables[k]] = x[k];
      total += x[k];
    }
  }
  // Remove the residual rounding of the solver so the invariants hold tightly.
  if (total > 0.0) {
    for (auto& [set, value] : masses) value /= total;
  }
  return MassFunction(ProductFrame(interval.frame()), std::move(masses));
}

bool is_representable(const ProbabilityInterval& interval, std::span<const Subset> forbidden) {
  const MassProgram mp = build_mass_program(interval, forbidden, {});
  return lp::solve(mp.program).optimal();
}

ProbabilityInterval widen(const ProbabilityInterval& interval, double epsilon, Widening rule) {
  std::vector<double> lower(interval.size()), upper(interval.size());
  for (std::size_t i = 0; i < interval.size(); ++i) {
    lower[i] = rule == Widening::kBothEnds ? std::max(interval.lower(i) - epsilon, 0.0)
                                           : interval.lower(i);
    upper[i] = std::min(interval.upper(i) + epsilon, 1.0);
  }
  return coherent_closure(ProbabilityInterval(interval.frame(), std::move(lower), std::move(upper)));
}

RepairResult representability_repair(const ProbabilityInterval& interval,
                                     std::span<const Subset> forbidden, Widening rule) {
  if (!is_coherent(interval)) throw DomainError("representability_repair: interval is not coherent");
  if (is_representable(interval, forbidden)) return {interval, 0.0};
  double lo = 0.0;
  double hi = 1.0;
  if (!is_representable(widen(interval, hi, rule), forbidden)) {
    throw InfeasibleError("representability_repair: not representable even when fully widened");
  }
  while (hi - lo > kRepairResolution) {
    const double mid = 0.5 * (lo + hi);
    if (is_representable(widen(interval, mid, rule), forbidden)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {widen(interval, hi, rule), hi};
}

}  // namespace credal
