#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evoflow/grammar.hpp"

namespace evoflow {

enum class StepRole { Preprocessing, Classifier };

std::string role_name(StepRole r);
StepRole role_from_name(const std::string& s);

struct StepSpec {
  std::string algorithm;
  StepRole role = StepRole::Preprocessing;
  std::vector<std::pair<std::string, HParamValue>> hparams;  // tree order

  const HParamValue* find(const std::string& name) const;
  bool operator==(const StepSpec&) const = default;
};

// Linear pipeline: zero or more preprocessing steps, then one classifier.
struct WorkflowSpec {
  std::vector<StepSpec> steps;

  const StepSpec& classifier() const { return steps.back(); }
  bool operator==(const WorkflowSpec&) const = default;
};

WorkflowSpec to_phenotype(const Grammar& g, const DerivationTree& t);

// Human-readable one-liner: "pca(whiten=false,nComponents=7) -> kNN(...)".
std::string render_workflow(const WorkflowSpec& w);

nlohmann::json workflow_to_json(const WorkflowSpec& w);
WorkflowSpec workflow_from_json(const nlohmann::json& j);
nlohmann::json value_to_json(const HParamValue& v);
HParamValue value_from_json(const nlohmann::json& j);

// A bound hyper-parameter slot inside a derivation tree. The leaf pointer
// stays valid while the tree is alive and un-restructured.
struct HParamSlotRef {
  int step_index = 0;
  std::string algorithm;
  std::string hparam;
  TreeNode* leaf = nullptr;
};

std::vector<HParamSlotRef> collect_slots(const Grammar& g, TreeNode& root);

// Hyper-parameters shared by both workflows: pairs matched per algorithm by
// occurrence order (k-th pca in `a` against k-th pca in `b`), listed in the
// workflow order of `a`.
std::vector<std::pair<HParamSlotRef, HParamSlotRef>> common_hparams(const Grammar& g,
                                                                    TreeNode& a,
                                                                    TreeNode& b);

}  // namespace evoflow
