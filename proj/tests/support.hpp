#pragma once

// Random instance generators and brute-force oracles shared by the tests.
// Oracles here deliberately avoid the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "credal_chain/chain.hpp"
#include "credal_chain/interval.hpp"
#include "credal_chain/lp.hpp"
#include "credal_chain/mass.hpp"

namespace testing_support {

using credal::Subset;
using Rng = std::mt19937_64;
using Masses = std::map<Subset, double>;

inline double uniform(Rng& rng, double a = 0.0, double b = 1.0) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Random weights summing to one (flat Dirichlet).
inline std::vector<double> simplex_point(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - uniform(rng));
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

// Mass with up to `focal` random nonempty focal sets on n states.
inline Masses random_masses(Rng& rng, std::size_t n, std::size_t focal) {
  const Subset full = (Subset{1} << n) - 1;
  Masses m;
  const auto w = simplex_point(rng, focal);
  for (double v : w) m[pick(rng, 1, full)] += v;
  return m;
}

inline credal::MassFunction to_mass(const Masses& m, const credal::ProductFrame& frame) {
  return credal::MassFunction(frame, m);
}

// Singleton bounds of a mass, by direct summation.
inline void singleton_bounds(const Masses& m, std::size_t n, std::vector<double>& lower,
                             std::vector<double>& upper) {
  lower.assign(n, 0.0);
  upper.assign(n, 0.0);
  for (const auto& [set, v] : m) {
    for (std::size_t i = 0; i < n; ++i) {
      if (set == (Subset{1} << i)) lower[i] += v;
      if ((set >> i) & 1U) upper[i] += v;
    }
  }
}

// Coherent interval induced by a random mass.
inline credal::ProbabilityInterval random_coherent_interval(Rng& rng, std::size_t n) {
  std::vector<double> lower, upper;
  singleton_bounds(random_masses(rng, n, pick(rng, 1, 2 * n + 2)), n, lower, upper);
  return credal::ProbabilityInterval(lower, upper);
}

// Good interval: the singleton bounds of a mass shaped like singletons,
// complements of singletons and the full set.
inline credal::ProbabilityInterval random_good_interval(Rng& rng, std::size_t n) {
  const auto w = simplex_point(rng, 2 * n + 1);
  const Subset full = (Subset{1} << n) - 1;
  Masses m;
  for (std::size_t i = 0; i < n; ++i) {
    m[Subset{1} << i] += w[i];
    m[full & ~(Subset{1} << i)] += w[n + i];
  }
  m[full] += w[2 * n];
  std::vector<double> lower, upper;
  singleton_bounds(m, n, lower, upper);
  return credal::ProbabilityInterval(lower, upper);
}

inline credal::ChainModel random_chain(Rng& rng, std::size_t n, std::size_t k) {
  auto prior = random_coherent_interval(rng, n);
  std::vector<std::vector<credal::ProbabilityInterval>> links(k - 1);
  for (auto& link : links) {
    for (std::size_t i = 0; i < n; ++i) link.push_back(random_coherent_interval(rng, n));
  }
  return credal::ChainModel(prior, links);
}

inline double oracle_bel(const Masses& m, Subset w) {
  double total = 0.0;
  for (const auto& [set, v] : m) {
    if ((set & ~w) == 0) total += v;
  }
  return total;
}

inline double oracle_pl(const Masses& m, Subset w) {
  double total = 0.0;
  for (const auto& [set, v] : m) {
    if (set & w) total += v;
  }
  return total;
}

// Child-marginal mass of prior (x) conditionals built from the product form
// of the joint: every parent focal V paired with one conditional focal T^i
// per member i contributes m(V) * prod m_i(T^i) to the union of the T^i.
inline Masses oracle_child_marginal(const Masses& prior, const std::vector<Masses>& conditionals) {
  Masses out;
  for (const auto& [v_set, v_mass] : prior) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < 64; ++i) {
      if ((v_set >> i) & 1U) members.push_back(i);
    }
    // Odometer over one focal set per member.
    std::vector<std::vector<std::pair<Subset, double>>> options;
    for (std::size_t i : members) {
      options.emplace_back(conditionals[i].begin(), conditionals[i].end());
    }
    std::vector<std::size_t> pos(members.size(), 0);
    for (;;) {
      Subset u = 0;
      double p = v_mass;
      for (std::size_t t = 0; t < members.size(); ++t) {
        u |= options[t][pos[t]].first;
        p *= options[t][pos[t]].second;
      }
      out[u] += p;
      std::size_t t = 0;
      while (t < pos.size() && ++pos[t] == options[t].size()) pos[t++] = 0;
      if (t == pos.size()) break;
    }
  }
  return out;
}

// Maximum of an LP over {A x = b, 0 <= x <= 1} by enumerating every basic
// solution: each variable is at 0, at 1, or free, and the free ones must be
// determined uniquely by the equalities. Returns nullopt when infeasible.
inline std::optional<double> brute_force_lp(const credal::lp::LinearProgram& p) {
  const std::size_t n = p.num_variables();
  const std::size_t rows = p.num_constraints();
  std::optional<double> best;
  std::vector<int> state(n, 0);  // 0: at zero, 1: at one, 2: free
  for (;;) {
    std::vector<std::size_t> free_vars;
    std::vector<double> x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (state[j] == 1) x[j] = 1.0;
      if (state[j] == 2) free_vars.push_back(j);
    }
    const std::size_t f = free_vars.size();
    // Augmented system for the free variables.
    std::vector<std::vector<double>> a(rows, std::vector<double>(f + 1, 0.0));
    for (std::size_t r = 0; r < rows; ++r) {
      double rhs = p.rhs[r];
      for (std::size_t j = 0; j < n; ++j) rhs -= p.equalities[r][j] * x[j];
      for (std::size_t c = 0; c < f; ++c) a[r][c] = p.equalities[r][free_vars[c]];
      a[r][f] = rhs;
    }
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t c = 0; c < f && rank < rows; ++c) {
      std::size_t best_row = rank;
      for (std::size_t r = rank; r < rows; ++r) {
        if (std::abs(a[r][c]) > std::abs(a[best_row][c])) best_row = r;
      }
      if (std::abs(a[best_row][c]) < 1e-12) continue;
      std::swap(a[rank], a[best_row]);
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == rank) continue;
        const double factor = a[r][c] / a[rank][c];
        for (std::size_t cc = 0; cc <= f; ++cc) a[r][cc] -= factor * a[rank][cc];
      }
      pivot_col.push_back(c);
      ++rank;
    }
    bool ok = rank == f;
    for (std::size_t r = rank; r < rows && ok; ++r) ok = std::abs(a[r][f]) < 1e-9;
    if (ok) {
      for (std::size_t t = 0; t < rank; ++t) x[free_vars[pivot_col[t]]] = a[t][f] / a[t][pivot_col[t]];
      for (std::size_t j : free_vars) ok = ok && x[j] >= -1e-9 && x[j] <= 1.0 + 1e-9;
    }
    if (ok) {
      double value = 0.0;
      for (std::size_t j = 0; j < n; ++j) value += p.objective[j] * x[j];
      if (!best || value > *best) best = value;
    }
    std::size_t j = 0;
    while (j < n && ++state[j] == 3) state[j++] = 0;
    if (j == n) break;
  }
  return best;
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace testing_support
