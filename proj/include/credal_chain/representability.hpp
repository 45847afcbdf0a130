#pragma once

#include <functional>
#include <span>
#include <vector>

#include "credal_chain/interval.hpp"
#include "credal_chain/lp.hpp"
#include "credal_chain/mass.hpp"

namespace credal {

// Linear program over the masses of all nonempty, non-forbidden subsets of a
// frame, constrained to reproduce an interval on the singletons:
//   m({a_i}) = lower[i]                  (bel of singletons)
//   sum_{V containing a_i} m(V) = upper[i]   (pl of singletons)
//   sum_V m(V) = 1
struct MassProgram {
  lp::LinearProgram program;
  std::vector<Subset> variables;  // subset carried by each LP variable
};

MassProgram build_mass_program(const ProbabilityInterval& interval,
                               std::span<const Subset> forbidden,
                               const std::function<double(Subset)>& objective);

// Mass function from an LP solution of `mp`.
MassFunction mass_from_solution(const MassProgram& mp, const ProbabilityInterval& interval,
                                const std::vector<double>& x);

// Whether some mass function with no mass on `forbidden` matches the interval
// on the singletons.
bool is_representable(const ProbabilityInterval& interval, std::span<const Subset> forbidden);

enum class Widening {
  kUpper,     // upper + eps capped at 1, lower unchanged
  kBothEnds,  // additionally lower - eps floored at 0
};

// Uniform widening by epsilon followed by coherent_closure. Moving the lowers
// as well never raises the goodness margin once n >= 3, hence the kUpper
// default.
ProbabilityInterval widen(const ProbabilityInterval& interval, double epsilon,
                          Widening rule = Widening::kUpper);

struct RepairResult {
  ProbabilityInterval interval;
  double epsilon = 0.0;
};

inline constexpr double kRepairResolution = 1e-6;

// Smallest epsilon (bisection to kRepairResolution) for which widen(interval,
// epsilon) is representable under the forbidden sets. Representable input
// comes back unchanged with epsilon 0.
RepairResult representability_repair(const ProbabilityInterval& interval,
                                     std::span<const Subset> forbidden,
                                     Widening rule = Widening::kUpper);

}  // namespace credal
