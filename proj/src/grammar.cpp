#include "evoflow/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace evoflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool is_bracketed(const std::string& s) {
  return s.size() >= 3 && s.front() == '<' && s.back() == '>' &&
         s.find('<', 1) == std::string::npos &&
         s.find('>') == s.size() - 1;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool parse_ll(const std::string& s, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

struct Analysis {
  std::map<std::string, bool> can_alg;   // symbol can derive material containing an algorithm
  std::map<std::string, bool> must_alg;  // every complete derivation contains an algorithm
  std::map<std::string, bool> followable;  // an algorithm can appear after this symbol
  std::map<std::string, bool> can_end;     // this symbol can have no algorithm after it
};

}  // namespace

std::string format_value(const HParamValue& v) {
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  if (std::holds_alternative<long long>(v)) return std::to_string(std::get<long long>(v));
  if (std::holds_alternative<double>(v)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(v));
    return buf;
  }
  return std::get<std::string>(v);
}

const ProductionRule* Grammar::rule_for(const std::string& nt) const {
  auto it = rule_index_.find(nt);
  return it == rule_index_.end() ? nullptr : &rules_[it->second];
}

TerminalKind Grammar::terminal_kind(const std::string& terminal) const {
  auto it = terminal_kinds_.find(terminal);
  if (it == terminal_kinds_.end()) throw Error("unknown terminal '" + terminal + "'");
  return it->second;
}

bool Grammar::has_domain(const std::string& algorithm, const std::string& hparam) const {
  return domains_.count({algorithm, hparam}) > 0;
}

const HParamDomain& Grammar::domain(const std::string& algorithm,
                                    const std::string& hparam) const {
  auto it = domains_.find({algorithm, hparam});
  if (it == domains_.end())
    throw Error("no domain entry for " + algorithm + "." + hparam);
  return it->second;
}

int Grammar::min_structural_cost(const std::string& symbol) const {
  auto it = min_cost_.find(symbol);
  if (it == min_cost_.end()) throw Error("unknown symbol '" + symbol + "'");
  return it->second;
}

int Grammar::alternative_min_cost(const std::string& nt, std::size_t alt) const {
  const ProductionRule* rule = rule_for(nt);
  if (!rule || alt >= rule->alternatives.size())
    throw Error("no such alternative for " + nt);
  long long cost = rule->structural ? 1 : 0;
  for (const auto& sym : rule->alternatives[alt]) {
    int c = min_structural_cost(sym);
    if (c == INT_MAX) return INT_MAX;
    cost += c;
  }
  return cost > INT_MAX ? INT_MAX : static_cast<int>(cost);
}

// ---- parsing -------------------------------------------------------------

Grammar build_grammar(const std::string& text, std::vector<GrammarIssue>& issues) {
  Grammar g;
  g.content_hash_ = fnv1a(text);

  std::vector<std::string> structural_syms;
  bool saw_structural = false, in_domains = false;
  int line_no = 0;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;

    if (line.rfind("%structural", 0) == 0) {
      if (saw_structural) {
        issues.push_back({line_no, "duplicate %structural line"});
        continue;
      }
      saw_structural = true;
      auto toks = split_ws(line.substr(11));
      if (toks.empty()) issues.push_back({line_no, "%structural lists no non-terminals"});
      for (const auto& t : toks) {
        if (!is_bracketed(t))
          issues.push_back({line_no, "%structural entry '" + t + "' is not a non-terminal"});
        else
          structural_syms.push_back(t);
      }
      continue;
    }
    if (line == "%domains") {
      if (in_domains) issues.push_back({line_no, "duplicate %domains section"});
      in_domains = true;
      continue;
    }
    if (line[0] == '%') {
      issues.push_back({line_no, "unknown directive '" + split_ws(line)[0] + "'"});
      continue;
    }

    if (in_domains) {
      auto toks = split_ws(line);
      if (toks.size() < 2) {
        issues.push_back({line_no, "malformed domain entry"});
        continue;
      }
      const std::string& key = toks[0];
      auto dot = key.find('.');
      if (dot == std::string::npos || dot != key.rfind('.') || dot == 0 ||
          dot == key.size() - 1) {
        issues.push_back({line_no, "domain key '" + key + "' is not algorithm.hparam"});
        continue;
      }
      std::string alg = key.substr(0, dot), hp = key.substr(dot + 1);
      const std::string& kind = toks[1];
      HParamDomain d;
      bool ok = true;
      if (kind == "int" || kind == "real") {
        bool is_int = kind == "int";
        d.kind = is_int ? DomainKind::Integer : DomainKind::Real;
        if (toks.size() < 4 || toks.size() > 5 ||
            (toks.size() == 5 && toks[4] != "log")) {
          issues.push_back({line_no, "expected '" + kind + " lo hi [log]'"});
          ok = false;
        } else {
          d.log_scale = toks.size() == 5;
          if (is_int) {
            if (!parse_ll(toks[2], d.int_lo) || !parse_ll(toks[3], d.int_hi)) {
              issues.push_back({line_no, "non-integer bound in '" + line + "'"});
              ok = false;
            } else if (d.int_lo > d.int_hi) {
              issues.push_back({line_no, "empty integer range for " + key});
              ok = false;
            } else if (d.log_scale && d.int_lo <= 0) {
              issues.push_back({line_no, "log-scale range requires lo > 0 for " + key});
              ok = false;
            }
          } else {
            if (!parse_double(toks[2], d.real_lo) || !parse_double(toks[3], d.real_hi)) {
              issues.push_back({line_no, "non-numeric bound in '" + line + "'"});
              ok = false;
            } else if (d.real_lo > d.real_hi) {
              issues.push_back({line_no, "empty real range for " + key});
              ok = false;
            } else if (d.log_scale && d.real_lo <= 0) {
              issues.push_back({line_no, "log-scale range requires lo > 0 for " + key});
              ok = false;
            }
          }
        }
      } else if (kind == "cat") {
        d.kind = DomainKind::Categorical;
        if (toks.size() != 3) {
          issues.push_back({line_no, "expected 'cat v1,v2,...'"});
          ok = false;
        } else {
          std::stringstream vs(toks[2]);
          std::string v;
          while (std::getline(vs, v, ',')) {
            if (v.empty()) {
              issues.push_back({line_no, "empty category value for " + key});
              ok = false;
              break;
            }
            if (std::find(d.categories.begin(), d.categories.end(), v) !=
                d.categories.end()) {
              issues.push_back({line_no, "duplicate category '" + v + "' for " + key});
              ok = false;
              break;
            }
            d.categories.push_back(v);
          }
          if (ok && d.categories.empty()) {
            issues.push_back({line_no, "no category values for " + key});
            ok = false;
          }
        }
      } else if (kind == "bool") {
        d.kind = DomainKind::Boolean;
        if (toks.size() != 2) {
          issues.push_back({line_no, "'bool' takes no extra arguments"});
          ok = false;
        }
      } else {
        issues.push_back({line_no, "unknown domain kind '" + kind + "'"});
        ok = false;
      }
      if (!ok) continue;
      if (g.domains_.count({alg, hp})) {
        issues.push_back({line_no, "duplicate domain entry " + key});
        continue;
      }
      g.domains_[{alg, hp}] = d;
      continue;
    }

    // Production line or continuation ("| alt | alt").
    std::vector<std::string> rhs_tokens;
    bool continuation = line[0] == '|';
    if (continuation) {
      if (g.rules_.empty()) {
        issues.push_back({line_no, "continuation line before any rule"});
        continue;
      }
      rhs_tokens = split_ws(line);
    } else {
      auto sep = line.find("::=");
      if (sep == std::string::npos) {
        issues.push_back({line_no, "expected '::=' in rule"});
        continue;
      }
      std::string lhs = trim(line.substr(0, sep));
      if (!is_bracketed(lhs) || split_ws(lhs).size() != 1) {
        issues.push_back({line_no, "rule left-hand side '" + lhs + "' is not a non-terminal"});
        continue;
      }
      if (g.rule_index_.count(lhs)) {
        issues.push_back({line_no, "duplicate rule for " + lhs});
        continue;
      }
      ProductionRule rule;
      rule.lhs = lhs;
      rule.line = line_no;
      g.rule_index_[lhs] = g.rules_.size();
      g.rules_.push_back(rule);
      rhs_tokens = split_ws(line.substr(sep + 3));
      if (rhs_tokens.empty()) {
        issues.push_back({line_no, "rule for " + lhs + " has an empty right-hand side"});
        continue;
      }
    }

    ProductionRule& rule = g.rules_.back();
    std::vector<std::string> current;
    bool bad = false;
    auto flush = [&]() {
      if (current.empty()) {  // only stray '|' separators produce this
        issues.push_back({line_no, "empty alternative in rule for " + rule.lhs});
        bad = true;
      } else {
        rule.alternatives.push_back(current);
        current.clear();
      }
    };
    bool first_tok = true;
    for (const auto& tok : rhs_tokens) {
      if (tok == "|") {
        if (continuation && first_tok) {
          first_tok = false;
          continue;  // leading '|' opens the continued alternative
        }
        flush();
        if (bad) break;
      } else {
        if (tok.find('<') != std::string::npos || tok.find('>') != std::string::npos) {
          if (!is_bracketed(tok)) {
            issues.push_back({line_no, "malformed symbol '" + tok + "'"});
            bad = true;
            break;
          }
        }
        if (tok.find("::=") != std::string::npos) {
          issues.push_back({line_no, "unexpected '::=' in alternatives"});
          bad = true;
          break;
        }
        current.push_back(tok);
      }
      first_tok = false;
    }
    if (!bad) flush();
  }

  if (g.rules_.empty()) {
    issues.push_back({0, "no production rules"});
    return g;
  }
  g.root_ = g.rules_.front().lhs;

  if (!saw_structural) issues.push_back({0, "missing %structural line"});
  for (const auto& s : structural_syms) {
    auto it = g.rule_index_.find(s);
    if (it == g.rule_index_.end())
      issues.push_back({0, "%structural names undefined non-terminal " + s});
    else
      g.rules_[it->second].structural = true;
  }

  // Symbol tables.
  for (const auto& r : g.rules_) g.nonterminals_.insert(r.lhs);
  for (const auto& r : g.rules_)
    for (const auto& alt : r.alternatives)
      for (const auto& sym : alt) {
        if (is_bracketed(sym)) {
          if (!g.rule_index_.count(sym))
            issues.push_back({r.line, "undefined non-terminal " + sym});
          g.nonterminals_.insert(sym);
        } else {
          g.terminals_.insert(sym);
        }
      }

  // Minimal structural completion cost per symbol (fixpoint; INT_MAX means
  // the symbol cannot derive a terminal-only string).
  for (const auto& t : g.terminals_) g.min_cost_[t] = 0;
  for (const auto& nt : g.nonterminals_) g.min_cost_[nt] = INT_MAX;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules_) {
      long long best = INT_MAX;
      for (const auto& alt : r.alternatives) {
        long long cost = r.structural ? 1 : 0;
        bool feasible = true;
        for (const auto& sym : alt) {
          auto it = g.min_cost_.find(sym);
          if (it == g.min_cost_.end() || it->second == INT_MAX) {
            feasible = false;
            break;
          }
          cost += it->second;
        }
        if (feasible) best = std::min(best, cost);
      }
      if (best < g.min_cost_[r.lhs]) {
        g.min_cost_[r.lhs] = static_cast<int>(best);
        changed = true;
      }
    }
  }

  // Terminal tagging: slots are terminals named as some domain's hyper-parameter;
  // remaining terminals are algorithms, split into preprocessing/classifier by
  // whether an algorithm can ever appear after them.
  std::set<std::string> slot_names;
  for (const auto& [key, d] : g.domains_) slot_names.insert(key.second);

  Analysis an;
  for (const auto& t : g.terminals_) {
    bool alg = slot_names.count(t) == 0;
    an.can_alg[t] = alg;
    an.must_alg[t] = alg;
    an.followable[t] = false;
    an.can_end[t] = false;
  }
  for (const auto& nt : g.nonterminals_) {
    an.can_alg[nt] = false;
    an.must_alg[nt] = true;
    an.followable[nt] = false;
    an.can_end[nt] = false;
  }
  changed = true;
  while (changed) {  // can_alg: least fixpoint
    changed = false;
    for (const auto& r : g.rules_)
      for (const auto& alt : r.alternatives)
        for (const auto& sym : alt)
          if (an.can_alg[sym] && !an.can_alg[r.lhs]) {
            an.can_alg[r.lhs] = true;
            changed = true;
          }
  }
  changed = true;
  while (changed) {  // must_alg: greatest fixpoint
    changed = false;
    for (const auto& r : g.rules_) {
      bool all_alts = true;
      for (const auto& alt : r.alternatives) {
        bool alt_must = false;
        for (const auto& sym : alt)
          if (an.must_alg[sym]) {
            alt_must = true;
            break;
          }
        if (!alt_must) {
          all_alts = false;
          break;
        }
      }
      if (!all_alts && an.must_alg[r.lhs]) {
        an.must_alg[r.lhs] = false;
        changed = true;
      }
    }
  }
  an.can_end[g.root_] = true;
  changed = true;
  while (changed) {  // followable / can_end
    changed = false;
    for (const auto& r : g.rules_)
      for (const auto& alt : r.alternatives)
        for (std::size_t i = 0; i < alt.size(); ++i) {
          bool can_after = false, must_after = false;
          for (std::size_t j = i + 1; j < alt.size(); ++j) {
            can_after = can_after || an.can_alg[alt[j]];
            must_after = must_after || an.must_alg[alt[j]];
          }
          if ((can_after || an.followable[r.lhs]) && !an.followable[alt[i]]) {
            an.followable[alt[i]] = true;
            changed = true;
          }
          if (an.can_end[r.lhs] && !must_after && !an.can_end[alt[i]]) {
            an.can_end[alt[i]] = true;
            changed = true;
          }
        }
  }
  for (const auto& t : g.terminals_) {
    if (slot_names.count(t)) {
      g.terminal_kinds_[t] = TerminalKind::HParamSlot;
    } else if (an.followable[t] && an.can_end[t]) {
      issues.push_back({0, "algorithm '" + t +
                               "' can appear both before other algorithms and last; "
                               "its role is ambiguous"});
      g.terminal_kinds_[t] = TerminalKind::Preprocessing;
    } else if (an.can_end[t]) {
      g.terminal_kinds_[t] = TerminalKind::Classifier;
    } else {
      g.terminal_kinds_[t] = TerminalKind::Preprocessing;
    }
  }

  for (const auto& issue : g.validate()) issues.push_back(issue);
  return g;
}

std::vector<GrammarIssue> Grammar::validate() const {
  std::vector<GrammarIssue> issues;
  if (rules_.empty()) {
    issues.push_back({0, "no production rules"});
    return issues;
  }

  // Reachability from the root.
  std::set<std::string> reached{root_};
  std::vector<std::string> frontier{root_};
  while (!frontier.empty()) {
    std::string nt = frontier.back();
    frontier.pop_back();
    const ProductionRule* r = rule_for(nt);
    if (!r) continue;
    for (const auto& alt : r->alternatives)
      for (const auto& sym : alt)
        if (is_nonterminal(sym) && reached.insert(sym).second) frontier.push_back(sym);
  }
  for (const auto& r : rules_)
    if (!reached.count(r.lhs))
      issues.push_back({r.line, "unreachable non-terminal " + r.lhs});

  // Productivity.
  for (const auto& nt : nonterminals_) {
    auto it = min_cost_.find(nt);
    if (it == min_cost_.end() || it->second == INT_MAX)
      issues.push_back({0, "non-productive non-terminal " + nt +
                               " (cannot derive a terminal-only string)"});
  }

  // Hyper-parameter slot occurrences must resolve to exactly one domain entry
  // in every algorithm context they can appear under. Contexts are propagated
  // through a fixpoint: a non-terminal inherits the contexts of the positions
  // it occurs in; an algorithm terminal earlier in the same alternative
  // overrides the inherited context.
  const std::string kNone = "\x01none";
  std::map<std::string, std::set<std::string>> contexts;
  contexts[root_].insert(kNone);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules_)
      for (const auto& alt : r.alternatives) {
        std::string local;
        for (const auto& sym : alt) {
          if (is_terminal(sym) && terminal_kinds_.at(sym) != TerminalKind::HParamSlot) {
            local = sym;
            continue;
          }
          if (!is_nonterminal(sym)) continue;
          auto& dst = contexts[sym];
          std::size_t before = dst.size();
          if (!local.empty())
            dst.insert(local);
          else
            for (const auto& c : contexts[r.lhs]) dst.insert(c);
          changed = changed || dst.size() != before;
        }
      }
  }
  std::set<std::pair<std::string, std::string>> reported;
  for (const auto& r : rules_) {
    if (!reached.count(r.lhs)) continue;
    for (const auto& alt : r.alternatives) {
      std::string local;
      for (const auto& sym : alt) {
        if (!is_terminal(sym)) continue;
        if (terminal_kinds_.at(sym) != TerminalKind::HParamSlot) {
          local = sym;
          continue;
        }
        std::set<std::string> slot_ctx;
        if (!local.empty())
          slot_ctx.insert(local);
        else
          slot_ctx = contexts[r.lhs];
        for (const auto& c : slot_ctx) {
          if (c == kNone) {
            if (reported.insert({sym, c}).second)
              issues.push_back({r.line, "hyper-parameter slot '" + sym +
                                            "' can appear before any algorithm"});
          } else if (!domains_.count({c, sym})) {
            if (reported.insert({sym, c}).second)
              issues.push_back({r.line, "hyper-parameter slot '" + sym +
                                            "' has no domain entry for algorithm '" +
                                            c + "'"});
          }
        }
      }
    }
  }

  // Domain entries must name algorithm terminals, not slots.
  for (const auto& [key, d] : domains_) {
    auto it = terminal_kinds_.find(key.first);
    if (it != terminal_kinds_.end() && it->second == TerminalKind::HParamSlot)
      issues.push_back({0, "domain entry " + key.first + "." + key.second +
                               " names hyper-parameter slot '" + key.first +
                               "' as an algorithm"});
  }
  return issues;
}

Grammar Grammar::parse(const std::string& text) {
  std::vector<GrammarIssue> issues;
  Grammar g = build_grammar(text, issues);
  if (!issues.empty()) {
    std::string msg = "invalid grammar:";
    for (const auto& i : issues) {
      msg += "\n  ";
      if (i.line > 0) msg += "line " + std::to_string(i.line) + ": ";
      msg += i.message;
    }
    throw GrammarError(msg);
  }
  return g;
}

Grammar Grammar::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GrammarError("cannot open grammar file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<GrammarIssue> Grammar::lint(const std::string& text) {
  std::vector<GrammarIssue> issues;
  build_grammar(text, issues);
  return issues;
}

// ---- sampling ------------------------------------------------------------

HParamValue sample_hparam_value(const HParamDomain& d, RandomStream& rng) {
  switch (d.kind) {
    case DomainKind::Integer: {
      if (d.log_scale) {
        double lo = std::log10(static_cast<double>(d.int_lo));
        double hi = std::log10(static_cast<double>(d.int_hi));
        long long v = std::llround(std::pow(10.0, uniform_real(rng, lo, hi)));
        return std::clamp(v, d.int_lo, d.int_hi);
      }
      return std::uniform_int_distribution<long long>(d.int_lo, d.int_hi)(rng);
    }
    case DomainKind::Real: {
      if (d.log_scale)
        return std::pow(10.0, uniform_real(rng, std::log10(d.real_lo),
                                           std::log10(d.real_hi)));
      return uniform_real(rng, d.real_lo, d.real_hi);
    }
    case DomainKind::Categorical:
      return d.categories[uniform_index(rng, d.categories.size())];
    case DomainKind::Boolean:
      return flip(rng, 0.5);
  }
  throw Error("unhandled domain kind");
}

namespace {

TreeNode expand(const Grammar& g, const std::string& sym, int budget, int& used_out,
                std::string& cur_alg, RandomStream& rng) {
  if (g.is_terminal(sym)) {
    TreeNode leaf;
    leaf.symbol = sym;
    if (g.terminal_kind(sym) == TerminalKind::HParamSlot) {
      if (cur_alg.empty())
        throw Error("hyper-parameter slot '" + sym + "' reached before any algorithm");
      leaf.has_value = true;
      leaf.value = sample_hparam_value(g.domain(cur_alg, sym), rng);
    } else {
      cur_alg = sym;
    }
    used_out = 0;
    return leaf;
  }
  const ProductionRule* rule = g.rule_for(sym);
  if (!rule) throw Error("undefined non-terminal " + sym);

  std::vector<std::size_t> feasible;
  for (std::size_t i = 0; i < rule->alternatives.size(); ++i)
    if (g.alternative_min_cost(sym, i) <= budget) feasible.push_back(i);
  if (feasible.empty())
    throw Error("derivation budget exhausted while expanding " + sym);

  std::size_t pick = feasible[uniform_index(rng, feasible.size())];
  int slack = budget - g.alternative_min_cost(sym, pick);

  TreeNode node;
  node.symbol = sym;
  node.alt = static_cast<int>(pick);
  int used = rule->structural ? 1 : 0;
  for (const auto& child_sym : rule->alternatives[pick]) {
    int child_budget = g.min_structural_cost(child_sym) + slack;
    int child_used = 0;
    node.children.push_back(expand(g, child_sym, child_budget, child_used, cur_alg, rng));
    slack -= child_used - g.min_structural_cost(child_sym);
    used += child_used;
  }
  used_out = used;
  return node;
}

}  // namespace

DerivationTree random_derivation(const Grammar& g, int max_der, RandomStream& rng) {
  int need = g.min_workflow_cost();
  if (max_der < need)
    throw Error("maxDer=" + std::to_string(max_der) +
                " is below the grammar's minimal derivation count " +
                std::to_string(need));
  std::string cur_alg;
  int used = 0;
  return expand(g, g.root(), max_der, used, cur_alg, rng);
}

DerivationTree derive_symbol(const Grammar& g, const std::string& symbol, int budget,
                             RandomStream& rng, const std::string& algorithm_context) {
  if (budget < g.min_structural_cost(symbol))
    throw Error("budget " + std::to_string(budget) +
                " cannot complete symbol " + symbol);
  std::string cur_alg = algorithm_context;
  int used = 0;
  return expand(g, symbol, budget, used, cur_alg, rng);
}

int structural_derivation_count(const Grammar& g, const DerivationTree& t) {
  if (t.is_leaf()) return 0;
  const ProductionRule* rule = g.rule_for(t.symbol);
  int n = (rule && rule->structural) ? 1 : 0;
  for (const auto& c : t.children) n += structural_derivation_count(g, c);
  return n;
}

namespace {

void render(const TreeNode& n, std::string& out) {
  if (n.is_leaf()) {
    out += n.symbol;
    if (n.has_value) {
      out += '=';
      out += format_value(n.value);
    }
    return;
  }
  out += n.symbol;
  out += '[';
  out += std::to_string(n.alt);
  out += "](";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ' ';
    render(n.children[i], out);
  }
  out += ')';
}

}  // namespace

std::string tree_to_string(const DerivationTree& t) {
  std::string out;
  render(t, out);
  return out;
}

}  // namespace evoflow
