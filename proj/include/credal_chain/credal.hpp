#pragma once

#include <span>
#include <vector>

#include "credal_chain/chain.hpp"
#include "credal_chain/interval.hpp"

namespace credal {

// Linear objective over the credal set {x : lower <= x <= upper, sum x = 1}.
struct CredalLinearInstance {
  std::vector<double> coefficients;
  ProbabilityInterval interval;
};

struct LinearOptimum {
  double value = 0.0;
  std::vector<double> x;
};

// Exact minimum: start from the lower bounds and hand the remaining budget
// 1 - sum(lower) to the coordinates in ascending coefficient order, each up
// to its upper bound. Equal coefficients go in ascending index order.
// Throws DomainError for an incoherent interval.
LinearOptimum greedy_linear_min(const CredalLinearInstance& instance);
// Same with descending coefficient order.
LinearOptimum greedy_linear_max(const CredalLinearInstance& instance);

// Vertices of the credal set of a coherent interval: one greedy point per
// permutation of the states, deduplicated.
std::vector<std::vector<double>> credal_set_vertices(const ProbabilityInterval& interval);

// Exact marginal bounds at nodes 2..k under complete independence, by
// backward recursion: the coefficient vector c for the last link is the
// conditional bound column of the target state, and each earlier link maps c
// to d[i] = optimum over the credal set of parent state i of sum_j x_j c[j].
std::vector<NodeBounds> credal_chain_bounds(const ChainModel& chain);

// Independent oracle: enumerates vertex combinations of every local credal
// set forward along the chain and takes elementwise min/max. Reachable
// marginals are pruned to their convex hull between links (frames of size
// <= 3). Refuses chains with frames larger than 3 or more than 4 nodes.
std::vector<NodeBounds> brute_force_bounds(const ChainModel& chain);

}  // namespace credal
