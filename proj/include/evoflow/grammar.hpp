#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "evoflow/errors.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

enum class DomainKind { Integer, Real, Categorical, Boolean };

struct HParamDomain {
  DomainKind kind = DomainKind::Integer;
  long long int_lo = 0, int_hi = 0;     // Integer
  double real_lo = 0.0, real_hi = 0.0;  // Real
  bool log_scale = false;               // Integer/Real: sample uniform in log10 space
  std::vector<std::string> categories;  // Categorical

  bool operator==(const HParamDomain&) const = default;
};

using HParamValue = std::variant<bool, long long, double, std::string>;

std::string format_value(const HParamValue& v);  // canonical, round-trippable

struct ProductionRule {
  std::string lhs;
  std::vector<std::vector<std::string>> alternatives;  // file order preserved
  bool structural = false;  // expansions count toward the derivation budget
  int line = 0;
};

enum class TerminalKind { Preprocessing, Classifier, HParamSlot };

struct GrammarIssue {
  int line = 0;  // 0 when not tied to a specific line
  std::string message;
};

// Node of a derivation tree. Internal nodes carry the chosen alternative
// index; hyper-parameter slot leaves carry a bound value.
struct TreeNode {
  std::string symbol;
  int alt = -1;  // -1 for leaves
  std::vector<TreeNode> children;
  bool has_value = false;
  HParamValue value{};

  bool is_leaf() const { return alt < 0; }
  bool operator==(const TreeNode&) const = default;
};

using DerivationTree = TreeNode;

class Grammar {
 public:
  // Parses and fully validates; throws GrammarError listing every issue.
  static Grammar parse(const std::string& text);
  static Grammar parse_file(const std::string& path);

  // Full issue report without throwing (syntax issues suppress later phases).
  static std::vector<GrammarIssue> lint(const std::string& text);

  // Re-runs the semantic checks on this instance; empty for a parsed grammar.
  std::vector<GrammarIssue> validate() const;

  const std::string& root() const { return root_; }
  const std::vector<ProductionRule>& rules() const { return rules_; }
  const ProductionRule* rule_for(const std::string& nt) const;

  bool is_nonterminal(const std::string& s) const { return rule_index_.count(s) > 0; }
  bool is_terminal(const std::string& s) const { return terminal_kinds_.count(s) > 0; }
  TerminalKind terminal_kind(const std::string& terminal) const;

  const std::set<std::string>& nonterminals() const { return nonterminals_; }
  const std::set<std::string>& terminals() const { return terminals_; }

  bool has_domain(const std::string& algorithm, const std::string& hparam) const;
  const HParamDomain& domain(const std::string& algorithm, const std::string& hparam) const;
  const std::map<std::pair<std::string, std::string>, HParamDomain>& domains() const {
    return domains_;
  }

  // Minimal number of structural expansions needed to complete the symbol.
  int min_structural_cost(const std::string& symbol) const;
  int min_workflow_cost() const { return min_structural_cost(root_); }
  // Cost of committing to one alternative: the expansion itself (if the rule
  // is structural) plus the minimal completion of every symbol produced.
  int alternative_min_cost(const std::string& nt, std::size_t alt) const;

  // FNV-1a over the original file bytes; recorded in run artifacts.
  std::uint64_t content_hash() const { return content_hash_; }

 private:
  friend Grammar build_grammar(const std::string&, std::vector<GrammarIssue>&);

  std::string root_;
  std::vector<ProductionRule> rules_;
  std::map<std::string, std::size_t> rule_index_;
  std::set<std::string> nonterminals_;
  std::set<std::string> terminals_;
  std::map<std::string, TerminalKind> terminal_kinds_;
  std::map<std::pair<std::string, std::string>, HParamDomain> domains_;
  std::map<std::string, int> min_cost_;  // per symbol; INT_MAX = non-productive
  std::uint64_t content_hash_ = 0;
};

HParamValue sample_hparam_value(const HParamDomain& d, RandomStream& rng);

// Samples a complete derivation tree whose structural expansion count is
// <= max_der. Alternative choice is uniform over the alternatives that can
// still complete within the remaining structural budget.
DerivationTree random_derivation(const Grammar& g, int max_der, RandomStream& rng);

// Re-derives a single symbol under a structural budget. `algorithm_context`
// is the algorithm owning any hyper-parameter slots expanded before one of
// the subtree's own algorithm terminals appears (empty = none yet).
DerivationTree derive_symbol(const Grammar& g, const std::string& symbol, int budget,
                             RandomStream& rng, const std::string& algorithm_context = "");

int structural_derivation_count(const Grammar& g, const DerivationTree& t);

// Canonical one-line rendering, byte-stable for determinism checks.
std::string tree_to_string(const DerivationTree& t);

// Bundled default grammar (same content as grammars/evoflow.bnf).
const std::string& default_grammar_text();

}  // namespace evoflow
