#include "credal_chain/embedding.hpp"

#include <cmath>
#include <map>

#include "credal_chain/errors.hpp"

namespace credal {

namespace {

constexpr double kConflictTolerance = 1e-12;

void require_no_conflict(const Combination& c, const char* where) {
  if (c.conflict > kConflictTolerance) {
    throw std::logic_error(std::string(where) + ": unexpected conflict " +
                           std::to_string(c.conflict));
  }
}

}  // namespace

void ConditionalMassTable::validate() const {
  if (parent == child) throw StructuralError("conditional table: parent and child are the same frame");
  if (conditionals.size() != parent.size()) {
    throw StructuralError("conditional table: need one mass function per parent state");
  }
  for (const auto& m : conditionals) {
    if (!(m.frame() == ProductFrame(child))) {
      throw StructuralError("conditional table: conditional not defined on the child frame");
    }
  }
}

MassFunction embed_single(const ConditionalMassTable& table, std::size_t parent_state) {
  table.validate();
  const ProductFrame product(std::vector<Frame>{table.parent, table.child});
  const std::size_t m = table.child.size();
  Subset others = 0;
  for (std::size_t a = 0; a < table.parent.size(); ++a) {
    if (a == parent_state) continue;
    others |= subsets::full(m) << (a * m);
  }
  std::map<Subset, double> masses;
  for (const auto& [set, value] : table.conditionals.at(parent_state).focal_sets()) {
    masses[(set << (parent_state * m)) | others] += value;
  }
  return MassFunction(product, std::move(masses));
}

MassFunction embed_conditional(const ConditionalMassTable& table) {
  MassFunction acc = embed_single(table, 0);
  for (std::size_t a = 1; a < table.parent.size(); ++a) {
    Combination c = combine_dempster(acc, embed_single(table, a));
    require_no_conflict(c, "embed_conditional");
    acc = std::move(c.mass);
  }
  return acc;
}

MassFunction joint(const MassFunction& prior, const MassFunction& conditional) {
  if (prior.frame().num_factors() != 1 || conditional.frame().num_factors() != 2 ||
      !(conditional.frame().factor(0) == prior.frame().factor(0))) {
    throw StructuralError("joint: conditional must live on prior x child");
  }
  Combination c = combine_dempster(vacuous_extend(prior, conditional.frame()), conditional);
  require_no_conflict(c, "joint");
  return std::move(c.mass);
}

FullChainResult full_chain_joint(const ChainMasses& chain) {
  const std::size_t k = chain.frames.size();
  if (k < 2 || chain.links.size() + 1 != k) throw StructuralError("full_chain_joint: malformed chain");
  if (k > 4) throw StructuralError("full_chain_joint: refuses chains longer than 4 (oracle scale)");
  for (const Frame& f : chain.frames) {
    if (f.size() > 4) throw StructuralError("full_chain_joint: refuses frames larger than 4");
  }
  // Throws when the product exceeds 64 states.
  const ProductFrame everything(chain.frames);

  std::vector<MassFunction> embedded;
  for (std::size_t l = 0; l + 1 < k; ++l) {
    ConditionalMassTable table{chain.frames[l], chain.frames[l + 1], chain.links[l]};
    embedded.push_back(embed_conditional(table));
  }

  MassFunction direct = vacuous_extend(chain.prior, everything);
  for (const auto& e : embedded) {
    Combination c = combine_dempster(direct, vacuous_extend(e, everything));
    require_no_conflict(c, "full_chain_joint");
    direct = std::move(c.mass);
  }
  direct = marginalize(direct, k - 1);

  MassFunction stepwise = chain.prior;
  for (const auto& e : embedded) stepwise = marginalize(joint(stepwise, e), 1);

  return {std::move(direct), std::move(stepwise)};
}

}  // namespace credal
