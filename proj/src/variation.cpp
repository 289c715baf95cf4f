#include "evoflow/variation.hpp"

#include <algorithm>

namespace evoflow {

Individual make_individual(const Grammar& g, DerivationTree tree, std::uint64_t id) {
  Individual ind;
  ind.phenotype = to_phenotype(g, tree);
  ind.genotype = std::move(tree);
  ind.id = id;
  return ind;
}

std::vector<Individual> select_tournament(const std::vector<Individual>& pop,
                                          std::size_t count, RandomStream& rng) {
  if (pop.empty()) throw Error("tournament selection on empty population");
  for (const auto& ind : pop)
    if (!ind.evaluated()) throw Error("tournament selection on unevaluated individual");
  std::vector<Individual> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const Individual& x = pop[uniform_index(rng, pop.size())];
    const Individual& y = pop[uniform_index(rng, pop.size())];
    const Individual* winner;
    if (*x.fitness != *y.fitness)
      winner = *x.fitness > *y.fitness ? &x : &y;
    else
      winner = x.id <= y.id ? &x : &y;
    out.push_back(*winner);
  }
  return out;
}

namespace {

void collect_nonterminal_nodes(TreeNode& n, std::vector<TreeNode*>& out) {
  if (n.is_leaf()) return;
  out.push_back(&n);
  for (auto& c : n.children) collect_nonterminal_nodes(c, out);
}

// Symbols with at least one non-root occurrence in both trees, in grammar
// rule order so the uniform draw is reproducible.
std::vector<std::string> common_swap_symbols(const Grammar& g,
                                             const std::vector<TreeNode*>& na,
                                             const std::vector<TreeNode*>& nb) {
  auto has = [](const std::vector<TreeNode*>& nodes, const std::string& sym) {
    return std::any_of(nodes.begin(), nodes.end(),
                       [&](TreeNode* n) { return n->symbol == sym; });
  };
  std::vector<std::string> out;
  for (const auto& rule : g.rules()) {
    if (rule.lhs == g.root()) continue;
    if (has(na, rule.lhs) && has(nb, rule.lhs)) out.push_back(rule.lhs);
  }
  return out;
}

std::vector<TreeNode*> occurrences(const std::vector<TreeNode*>& nodes,
                                   const std::string& sym) {
  std::vector<TreeNode*> out;
  for (auto* n : nodes)
    if (n->symbol == sym) out.push_back(n);
  return out;
}

// Last algorithm terminal emitted before `target` in leaf order ("" if none).
bool context_before(const Grammar& g, const TreeNode& n, const TreeNode* target,
                    std::string& cur_alg, bool& found) {
  if (&n == target) {
    found = true;
    return true;
  }
  if (n.is_leaf()) {
    if (g.terminal_kind(n.symbol) != TerminalKind::HParamSlot) cur_alg = n.symbol;
    return false;
  }
  for (const auto& c : n.children)
    if (context_before(g, c, target, cur_alg, found)) return true;
  return false;
}

}  // namespace

CrossoverOutcome cx_struct(const Grammar& g, const DerivationTree& a,
                           const DerivationTree& b, int max_der, RandomStream& rng) {
  CrossoverOutcome out{a, b, false, 0, ""};
  for (int attempt = 0; attempt <= kCxStructRetries; ++attempt) {
    DerivationTree ca = a, cb = b;
    std::vector<TreeNode*> na, nb;
    collect_nonterminal_nodes(ca, na);
    collect_nonterminal_nodes(cb, nb);
    auto symbols = common_swap_symbols(g, na, nb);
    if (symbols.empty()) {
      out.retries = attempt;
      return out;  // nothing to exchange; parents unchanged
    }
    const std::string& sym = symbols[uniform_index(rng, symbols.size())];
    auto occ_a = occurrences(na, sym);
    auto occ_b = occurrences(nb, sym);
    TreeNode* site_a = occ_a[uniform_index(rng, occ_a.size())];
    TreeNode* site_b = occ_b[uniform_index(rng, occ_b.size())];
    std::swap(*site_a, *site_b);
    if (structural_derivation_count(g, ca) <= max_der &&
        structural_derivation_count(g, cb) <= max_der) {
      out.first = std::move(ca);
      out.second = std::move(cb);
      out.applied = true;
      out.retries = attempt;
      out.symbol = sym;
      return out;
    }
    out.retries = attempt + 1;
  }
  return out;  // every site draw breached the budget; parents unchanged
}

void swap_hparam_suffix(std::vector<std::pair<HParamSlotRef, HParamSlotRef>>& pairs,
                        std::size_t cut) {
  for (std::size_t i = cut; i < pairs.size(); ++i)
    std::swap(pairs[i].first.leaf->value, pairs[i].second.leaf->value);
}

CrossoverOutcome cx_hparams(const Grammar& g, const DerivationTree& a,
                            const DerivationTree& b, RandomStream& rng) {
  CrossoverOutcome out{a, b, false, 0, ""};
  auto pairs = common_hparams(g, out.first, out.second);
  if (pairs.size() < 2)
    throw Error("cx_hparams requires at least two common hyper-parameters");
  std::size_t cut =
      std::uniform_int_distribution<std::size_t>(1, pairs.size() - 1)(rng);
  swap_hparam_suffix(pairs, cut);
  out.applied = true;
  return out;
}

DerivationTree mut_struct(const Grammar& g, const DerivationTree& t, int max_der,
                          RandomStream& rng) {
  DerivationTree copy = t;
  std::vector<TreeNode*> nodes;
  collect_nonterminal_nodes(copy, nodes);
  if (nodes.empty()) return copy;
  TreeNode* site = nodes[uniform_index(rng, nodes.size())];

  int total = structural_derivation_count(g, copy);
  int branch = structural_derivation_count(g, *site);
  int budget = max_der - (total - branch);

  std::string cur_alg;
  bool found = false;
  context_before(g, copy, site, cur_alg, found);
  *site = derive_symbol(g, site->symbol, budget, rng, cur_alg);
  return copy;
}

DerivationTree mut_hparams(const Grammar& g, const DerivationTree& t, RandomStream& rng) {
  DerivationTree copy = t;
  auto slots = collect_slots(g, copy);
  if (slots.empty()) return copy;

  std::size_t n_pre = 0, n_clf = 0;
  for (const auto& s : slots)
    if (g.terminal_kind(s.algorithm) == TerminalKind::Classifier)
      ++n_clf;
    else
      ++n_pre;

  for (const auto& s : slots) {
    bool clf = g.terminal_kind(s.algorithm) == TerminalKind::Classifier;
    double p = 1.0 / static_cast<double>(clf ? n_clf : n_pre);
    if (flip(rng, p))
      s.leaf->value = sample_hparam_value(g.domain(s.algorithm, s.hparam), rng);
  }
  return copy;
}

}  // namespace evoflow
