#include "credal_chain/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "credal_chain/errors.hpp"
#include "credal_chain/lp.hpp"
#include "credal_chain/representability.hpp"

namespace credal {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kSgmUniformFix: return "sgm-uniform";
    case Strategy::kSgmAdhocFix: return "sgm-adhoc";
    case Strategy::kAdhocMass: return "adhoc-mass";
    case Strategy::kFullMass: return "full-mass";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kSgmUniformFix, Strategy::kSgmAdhocFix, Strategy::kAdhocMass,
                     Strategy::kFullMass}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- one step

namespace {

void check_dimensions(const MassFunction& parent, const ConditionalBounds& cond) {
  if (parent.frame().num_factors() != 1) {
    throw StructuralError("step: parent mass must live on a single frame");
  }
  const std::size_t n = parent.frame().num_states();
  if (cond.parents() != n || cond.upper.size() != n) {
    throw StructuralError("step: conditional bounds need " + std::to_string(n) + " rows");
  }
  const std::size_t m = cond.children();
  for (std::size_t i = 0; i < n; ++i) {
    if (cond.lower[i].size() != m || cond.upper[i].size() != m) {
      throw StructuralError("step: ragged conditional bounds");
    }
  }
}

std::vector<double> complement_column(const ConditionalBounds& cond, std::size_t j) {
  std::vector<double> col = cond.upper_column(j);
  for (double& v : col) v = 1.0 - v;
  return col;
}

// prod_{h != i} c_h for every i.
std::vector<double> leave_one_out_products(std::span<const double> c, std::size_t& mults) {
  std::vector<double> out(c.size(), 1.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t h = 0; h < c.size(); ++h) {
      if (h != i) out[i] *= c[h];
    }
  }
  mults += c.size() * (c.size() - 1);
  return out;
}

double subset_product(Subset s, std::span<const double> c) {
  double p = 1.0;
  for (std::size_t i : subsets::members(s)) p *= c[i];
  return p;
}

std::string describe(const ProbabilityInterval& interval, std::span<const double> column) {
  std::ostringstream os;
  os.precision(17);
  os << "lower=[";
  for (double v : interval.lower()) os << v << ' ';
  os << "] upper=[";
  for (double v : interval.upper()) os << v << ' ';
  os << "] column=[";
  for (double v : column) os << v << ' ';
  os << ']';
  return os.str();
}

}  // namespace

double belief_mixture(const MassFunction& parent, std::span<const double> column,
                      std::size_t* multiplications) {
  if (column.size() != parent.frame().num_states()) {
    throw StructuralError("belief_mixture: column length does not match the parent frame");
  }
  double total = 0.0;
  std::size_t mults = 0;
  for (const auto& [set, value] : parent.focal_sets()) {
    double p = value;
    for (std::size_t i : subsets::members(set)) p *= column[i];
    mults += subsets::cardinality(set);
    total += p;
  }
  if (multiplications) *multiplications += mults;
  return total;
}

StepBounds closed_form_step(const MassFunction& parent, const ConditionalBounds& cond) {
  check_dimensions(parent, cond);
  StepBounds out;
  const std::size_t m = cond.children();
  out.lower.resize(m);
  out.upper.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.lower[j] = belief_mixture(parent, cond.lower_column(j), &out.multiplications);
    out.upper[j] = 1.0 - belief_mixture(parent, complement_column(cond, j), &out.multiplications);
  }
  return out;
}

std::vector<Subset> forbidden_sets(std::span<const double> coefficients) {
  const std::size_t n = coefficients.size();
  if (n < 2) return {};
  if (n > 16) throw StructuralError("forbidden_sets: frame too large");
  std::vector<double> sorted(coefficients.begin(), coefficients.end());
  std::sort(sorted.begin(), sorted.end());
  const double second = sorted[1];
  std::vector<Subset> out;
  for (Subset v = 1; v <= subsets::full(n); ++v) {
    if (subsets::cardinality(v) < 2) continue;
    if (subset_product(v, coefficients) > second + kInternalTolerance) out.push_back(v);
  }
  return out;
}

AdhocMassStep adhoc_mass_step(const ProbabilityInterval& parent, const ConditionalBounds& cond) {
  if (!is_coherent(parent)) throw DomainError("adhoc_mass_step: parent interval is not coherent");
  check_dimensions(MassFunction::vacuous(ProductFrame(parent.frame())), cond);
  AdhocMassStep out;
  const std::size_t m = cond.children();

  auto optimize = [&](std::span<const double> column, double& value, double& epsilon,
                      double& gap) -> MassFunction {
    const std::vector<Subset> forbidden = forbidden_sets(column);
    auto objective = [&](Subset s) { return subset_product(s, column); };
    ProbabilityInterval used = parent;
    epsilon = 0.0;
    MassProgram mp = build_mass_program(used, forbidden, objective);
    lp::LpSolution sol = lp::solve(mp.program);
    if (sol.status == lp::Status::kInfeasible) {
      RepairResult repaired = representability_repair(parent, forbidden);
      used = std::move(repaired.interval);
      epsilon = repaired.epsilon;
      mp = build_mass_program(used, forbidden, objective);
      sol = lp::solve(mp.program);
    }
    if (!sol.optimal()) {
      throw SolverError(std::string("adhoc_mass_step: program ") + lp::to_string(sol.status) +
                        " for " + describe(used, column));
    }
    value = sol.objective;
    gap = sol.certificate.duality_gap;
    return mass_from_solution(mp, used, sol.x);
  };

  out.lower.resize(m);
  out.upper.resize(m);
  out.lower_epsilon.resize(m);
  out.upper_epsilon.resize(m);
  out.lower_gap.resize(m);
  out.upper_gap.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double> lo_col = cond.lower_column(j);
    out.lower_masses.push_back(optimize(lo_col, out.lower[j], out.lower_epsilon[j], out.lower_gap[j]));
    const std::vector<double> up_col = complement_column(cond, j);
    double v = 0.0;
    out.upper_masses.push_back(optimize(up_col, v, out.upper_epsilon[j], out.upper_gap[j]));
    out.upper[j] = 1.0 - v;
  }
  return out;
}

MassFunction full_mass_step(const MassFunction& parent, std::span<const MassFunction> conditionals,
                            const Frame& child) {
  if (parent.frame().num_factors() != 1) {
    throw StructuralError("full_mass_step: parent mass must live on a single frame");
  }
  if (conditionals.size() != parent.frame().num_states()) {
    throw StructuralError("full_mass_step: need one conditional per parent state");
  }
  const ProductFrame child_frame(child);
  std::vector<std::vector<double>> tables;
  for (const auto& c : conditionals) {
    if (c.frame().num_states() != child.size()) {
      throw StructuralError("full_mass_step: conditional on the wrong frame");
    }
    tables.push_back(belief_table(c));
  }
  const std::size_t count = std::size_t{1} << child.size();
  std::vector<double> bel_child(count, 0.0);
  for (const auto& [set, value] : parent.focal_sets()) {
    const auto members = subsets::members(set);
    for (std::size_t t = 0; t < count; ++t) {
      double p = value;
      for (std::size_t i : members) p *= tables[i][t];
      bel_child[t] += p;
    }
  }
  bel_child[0] = 0.0;
  MobiusResult r = mobius_inverse(bel_child, child_frame);
  if (!r.is_belief()) {
    throw std::logic_error("full_mass_step: marginal is not a belief function");
  }
  return std::move(*r.mass);
}

// ---------------------------------------------------------------- chains

ProbabilityInterval InferenceResult::interval(const Frame& frame) const {
  return ProbabilityInterval(frame, lower, upper);
}

double InferenceResult::mean_width() const {
  double total = 0.0;
  for (std::size_t j = 0; j < lower.size(); ++j) total += upper[j] - lower[j];
  return lower.empty() ? 0.0 : total / static_cast<double>(lower.size());
}

namespace {

ProbabilityInterval with_frame(const ProbabilityInterval& interval, const Frame& frame) {
  return ProbabilityInterval(frame, interval.lower(), interval.upper());
}

// SGM of the uniformly fixed interval.
MassFunction uniform_sgm(const ProbabilityInterval& interval, StepDiagnostics* diag) {
  const GoodnessReport report = goodness(interval);
  FixedInterval fixed = fix_uniform(interval);
  if (diag) {
    diag->parent_delta = report.delta;
    diag->parent_fixed = !report.good();
    diag->uniform_fix = fixed.added;
  }
  return sgm_from_interval(fixed.interval);
}

void sgm_adhoc_step(const ProbabilityInterval& parent, const ConditionalBounds& cond,
                    InferenceResult& out) {
  StepDiagnostics& diag = out.diagnostics;
  const GoodnessReport report = goodness(parent);
  diag.parent_delta = report.delta;
  diag.parent_fixed = !report.good();
  if (report.good()) {
    const StepBounds step = closed_form_step(sgm_from_interval(parent), cond);
    out.lower = step.lower;
    out.upper = step.upper;
    diag.multiplications += step.multiplications;
    return;
  }
  const std::size_t m = cond.children();
  out.lower.resize(m);
  out.upper.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double> lo_col = cond.lower_column(j);
    FixedInterval lo_fix = fix_adhoc(parent, leave_one_out_products(lo_col, diag.multiplications));
    out.lower[j] = belief_mixture(sgm_from_interval(lo_fix.interval), lo_col, &diag.multiplications);
    diag.lower_fix.push_back(std::move(lo_fix.added));

    const std::vector<double> up_col = complement_column(cond, j);
    FixedInterval up_fix = fix_adhoc(parent, leave_one_out_products(up_col, diag.multiplications));
    out.upper[j] =
        1.0 - belief_mixture(sgm_from_interval(up_fix.interval), up_col, &diag.multiplications);
    diag.upper_fix.push_back(std::move(up_fix.added));
  }
}

}  // namespace

std::vector<InferenceResult> propagate_chain(const ChainModel& chain, Strategy strategy,
                                             const std::optional<MassFunction>& prior_mass) {
  if (prior_mass) {
    if (prior_mass->frame().num_factors() != 1 ||
        prior_mass->frame().num_states() != chain.frame(0).size()) {
      throw StructuralError("propagate_chain: prior mass does not match the first node");
    }
  }
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<InferenceResult> results;
  ProbabilityInterval current = with_frame(chain.prior(), chain.frame(0));
  std::optional<MassFunction> full;  // kFullMass state

  for (std::size_t l = 0; l + 1 < chain.length(); ++l) {
    const ConditionalBounds cond = chain.bounds(l);
    const Frame& child = chain.frame(l + 1);
    InferenceResult r;
    r.node = l + 2;
    r.method = strategy;
    StepDiagnostics& diag = r.diagnostics;

    if (l == 0 && prior_mass && strategy != Strategy::kFullMass) {
      diag.parent_delta = kNaN;
      const StepBounds step = closed_form_step(*prior_mass, cond);
      r.lower = step.lower;
      r.upper = step.upper;
      diag.multiplications += step.multiplications;
    } else {
      switch (strategy) {
        case Strategy::kSgmUniformFix: {
          const StepBounds step = closed_form_step(uniform_sgm(current, &diag), cond);
          r.lower = step.lower;
          r.upper = step.upper;
          diag.multiplications += step.multiplications;
          break;
        }
        case Strategy::kSgmAdhocFix:
          sgm_adhoc_step(current, cond, r);
          break;
        case Strategy::kAdhocMass: {
          diag.parent_delta = goodness(current).delta;
          AdhocMassStep step = adhoc_mass_step(current, cond);
          r.lower = std::move(step.lower);
          r.upper = std::move(step.upper);
          diag.lower_epsilon = std::move(step.lower_epsilon);
          diag.upper_epsilon = std::move(step.upper_epsilon);
          break;
        }
        case Strategy::kFullMass: {
          diag.parent_delta = kNaN;
          if (!full) {
            full = prior_mass ? *prior_mass
                              : uniform_sgm(with_frame(chain.prior(), chain.frame(0)), nullptr);
          }
          std::vector<MassFunction> conditionals;
          for (const auto& interval : chain.link(l)) {
            conditionals.push_back(uniform_sgm(with_frame(interval, child), nullptr));
          }
          full = full_mass_step(*full, conditionals, child);
          const ProbabilityInterval iv = interval_from_mass(*full);
          r.lower = iv.lower();
          r.upper = iv.upper();
          break;
        }
      }
    }

    ProbabilityInterval next(child, r.lower, r.upper);
    if (!is_coherent(next)) {
      next = coherent_closure(next);
      r.lower = next.lower();
      r.upper = next.upper();
      diag.closure_applied = true;
    }
    current = std::move(next);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace credal
