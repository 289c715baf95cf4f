#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evoflow/encoding.hpp"
#include "evoflow/grammar.hpp"

namespace evoflow {

struct Individual {
  DerivationTree genotype;
  WorkflowSpec phenotype;
  std::uint64_t id = 0;  // creation counter; ties in selection break toward lower id
  std::optional<double> fitness;
  std::optional<std::vector<int>> predictions;  // out-of-fold, dataset order

  bool evaluated() const { return fitness.has_value(); }
};

Individual make_individual(const Grammar& g, DerivationTree tree, std::uint64_t id);

// Binary tournament with replacement: `count` independent tournaments, each
// drawing two population members uniformly and keeping the fitter (ties by
// lower id). Requires an evaluated, non-empty population.
std::vector<Individual> select_tournament(const std::vector<Individual>& pop,
                                          std::size_t count, RandomStream& rng);

struct CrossoverOutcome {
  DerivationTree first;
  DerivationTree second;
  bool applied = false;   // false: parents returned unchanged
  int retries = 0;        // budget-violating attempts before success/give-up
  std::string symbol;     // swap symbol when applied
};

// Subtree exchange at a uniformly chosen non-terminal present in both trees
// (the root symbol is excluded). Children breaching max_der trigger fresh
// site draws, up to kCxStructRetries; then the parents come back unchanged.
inline constexpr int kCxStructRetries = 10;
CrossoverOutcome cx_struct(const Grammar& g, const DerivationTree& a,
                           const DerivationTree& b, int max_der, RandomStream& rng);

// Swaps the bound values of every common hyper-parameter pair at index >= cut.
// The pair list must come from common_hparams on the two trees being edited.
void swap_hparam_suffix(std::vector<std::pair<HParamSlotRef, HParamSlotRef>>& pairs,
                        std::size_t cut);

// One-point hyper-parameter crossover: cut drawn uniformly in [1, m-1] over
// the m >= 2 common pairs; values at indices >= cut are exchanged.
CrossoverOutcome cx_hparams(const Grammar& g, const DerivationTree& a,
                            const DerivationTree& b, RandomStream& rng);

// Re-derives a uniformly chosen non-terminal occurrence under the budget left
// by the rest of the tree.
DerivationTree mut_struct(const Grammar& g, const DerivationTree& t, int max_der,
                          RandomStream& rng);

// Resamples each bound slot independently: preprocessing slots with
// probability 1/P, classifier slots with probability 1/C (P and C being the
// slot counts of each section). A slotless tree is returned unchanged.
DerivationTree mut_hparams(const Grammar& g, const DerivationTree& t, RandomStream& rng);

}  // namespace evoflow
