#pragma once

#include <vector>

#include "credal_chain/frame.hpp"
#include "credal_chain/mass.hpp"

namespace credal {

// One mass function on the child frame per parent state.
struct ConditionalMassTable {
  Frame parent;
  Frame child;
  std::vector<MassFunction> conditionals;

  void validate() const;
};

// Smets' conditional embedding of the conditional for one parent state a_i:
// each focal set V of the conditional becomes (a_i x V) u ((E_A \ a_i) x E_B)
// on the product parent x child.
MassFunction embed_single(const ConditionalMassTable& table, std::size_t parent_state);

// Dempster combination of all single embeddings (m_{B|A}). The pieces never
// conflict.
MassFunction embed_conditional(const ConditionalMassTable& table);

// Prior vacuously extended to parent x child, combined with m_{B|A}.
MassFunction joint(const MassFunction& prior, const MassFunction& conditional);

// A chain whose local models are already mass functions.
struct ChainMasses {
  std::vector<Frame> frames;
  MassFunction prior;
  // links[l][i]: mass on frames[l + 1] given frames[l] = i.
  std::vector<std::vector<MassFunction>> links;
};

struct FullChainResult {
  // Marginal on the last node of the joint over the full product frame.
  MassFunction direct;
  // Same marginal computed link by link (joint, then marginalize).
  MassFunction stepwise;
};

// Oracle-scale only: refuses chains longer than 4, frames larger than 4, or
// product frames beyond 64 states.
FullChainResult full_chain_joint(const ChainMasses& chain);

}  // namespace credal
