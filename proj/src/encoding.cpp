#include "evoflow/encoding.hpp"

#include <map>

namespace evoflow {

std::string role_name(StepRole r) {
  return r == StepRole::Preprocessing ? "preprocessing" : "classifier";
}

StepRole role_from_name(const std::string& s) {
  if (s == "preprocessing") return StepRole::Preprocessing;
  if (s == "classifier") return StepRole::Classifier;
  throw Error("unknown step role '" + s + "'");
}

const HParamValue* StepSpec::find(const std::string& name) const {
  for (const auto& [n, v] : hparams)
    if (n == name) return &v;
  return nullptr;
}

namespace {

void walk_leaves(const Grammar& g, const TreeNode& n, WorkflowSpec& out) {
  if (n.is_leaf()) {
    TerminalKind kind = g.terminal_kind(n.symbol);
    if (kind == TerminalKind::HParamSlot) {
      if (out.steps.empty())
        throw Error("hyper-parameter slot '" + n.symbol + "' precedes any algorithm");
      out.steps.back().hparams.emplace_back(n.symbol, n.value);
    } else {
      StepSpec step;
      step.algorithm = n.symbol;
      step.role = kind == TerminalKind::Classifier ? StepRole::Classifier
                                                   : StepRole::Preprocessing;
      out.steps.push_back(std::move(step));
    }
    return;
  }
  for (const auto& c : n.children) walk_leaves(g, c, out);
}

}  // namespace

WorkflowSpec to_phenotype(const Grammar& g, const DerivationTree& t) {
  WorkflowSpec w;
  walk_leaves(g, t, w);
  if (w.steps.empty()) throw Error("derivation tree yields an empty workflow");
  for (std::size_t i = 0; i + 1 < w.steps.size(); ++i)
    if (w.steps[i].role != StepRole::Preprocessing)
      throw Error("workflow has classifier '" + w.steps[i].algorithm +
                  "' before the final position");
  if (w.steps.back().role != StepRole::Classifier)
    throw Error("workflow does not end in a classifier");
  return w;
}

std::string render_workflow(const WorkflowSpec& w) {
  std::string out;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    if (i) out += " -> ";
    out += w.steps[i].algorithm;
    out += '(';
    for (std::size_t j = 0; j < w.steps[i].hparams.size(); ++j) {
      if (j) out += ',';
      out += w.steps[i].hparams[j].first;
      out += '=';
      out += format_value(w.steps[i].hparams[j].second);
    }
    out += ')';
  }
  return out;
}

nlohmann::json value_to_json(const HParamValue& v) {
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
  if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  return std::get<std::string>(v);
}

HParamValue value_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw Error("hyper-parameter value has unsupported JSON type");
}

nlohmann::json workflow_to_json(const WorkflowSpec& w) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : w.steps) {
    nlohmann::json hp = nlohmann::json::array();  // array of pairs keeps order
    for (const auto& [name, value] : s.hparams)
      hp.push_back(nlohmann::json::array({name, value_to_json(value)}));
    steps.push_back({{"algorithm", s.algorithm},
                     {"role", role_name(s.role)},
                     {"hparams", hp}});
  }
  return steps;
}

WorkflowSpec workflow_from_json(const nlohmann::json& j) {
  WorkflowSpec w;
  for (const auto& js : j) {
    StepSpec s;
    s.algorithm = js.at("algorithm").get<std::string>();
    s.role = role_from_name(js.at("role").get<std::string>());
    for (const auto& pair : js.at("hparams"))
      s.hparams.emplace_back(pair.at(0).get<std::string>(), value_from_json(pair.at(1)));
    w.steps.push_back(std::move(s));
  }
  return w;
}

namespace {

void collect_rec(const Grammar& g, TreeNode& n, std::vector<HParamSlotRef>& out,
                 int& step_index, std::string& cur_alg) {
  if (n.is_leaf()) {
    if (g.terminal_kind(n.symbol) == TerminalKind::HParamSlot) {
      out.push_back({step_index, cur_alg, n.symbol, &n});
    } else {
      ++step_index;
      cur_alg = n.symbol;
    }
    return;
  }
  for (auto& c : n.children) collect_rec(g, c, out, step_index, cur_alg);
}

}  // namespace

std::vector<HParamSlotRef> collect_slots(const Grammar& g, TreeNode& root) {
  std::vector<HParamSlotRef> out;
  int step_index = -1;
  std::string cur_alg;
  collect_rec(g, root, out, step_index, cur_alg);
  return out;
}

std::vector<std::pair<HParamSlotRef, HParamSlotRef>> common_hparams(const Grammar& g,
                                                                    TreeNode& a,
                                                                    TreeNode& b) {
  auto slots_a = collect_slots(g, a);
  auto slots_b = collect_slots(g, b);

  // Per-workflow view: each step's algorithm plus the occurrence index of
  // that algorithm among all of the workflow's steps (slot-less steps count).
  struct StepView {
    std::string algorithm;
    int occurrence = 0;
    std::vector<HParamSlotRef*> slots;
  };
  auto build = [&](TreeNode& root, std::vector<HParamSlotRef>& slots) {
    std::vector<StepView> steps;
    for (const auto& s : to_phenotype(g, root).steps) {
      StepView v;
      v.algorithm = s.algorithm;
      for (const auto& prev : steps)
        if (prev.algorithm == v.algorithm) ++v.occurrence;
      steps.push_back(std::move(v));
    }
    for (auto& ref : slots) steps[static_cast<std::size_t>(ref.step_index)].slots.push_back(&ref);
    return steps;
  };
  auto steps_a = build(a, slots_a);
  auto steps_b = build(b, slots_b);

  std::vector<std::pair<HParamSlotRef, HParamSlotRef>> out;
  for (auto& sa : steps_a) {
    StepView* match = nullptr;
    for (auto& sb : steps_b)
      if (sb.algorithm == sa.algorithm && sb.occurrence == sa.occurrence) {
        match = &sb;
        break;
      }
    if (!match) continue;
    for (auto* ra : sa.slots)
      for (auto* rb : match->slots)
        if (rb->hparam == ra->hparam) {
          out.emplace_back(*ra, *rb);
          break;
        }
  }
  return out;
}

}  // namespace evoflow
