#include <algorithm>

#include "evoflow/archive.hpp"
#include "evoflow/errors.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

double disagreement(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw DataError("disagreement: length mismatch");
  if (x.empty()) throw DataError("disagreement: empty vectors");
  std::size_t differ = 0;
  for (std::size_t i = 0; i < x.size(); ++i) differ += x[i] != y[i];
  return static_cast<double>(differ) / static_cast<double>(x.size());
}

double divfit_value(double div, double fitness, double div_weight) {
  return div_weight * div + (1.0 - div_weight) * fitness;
}

double div_member(const std::vector<ArchiveMember>& members, std::size_t i) {
  if (members.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (j == i) continue;
    sum += disagreement(*members[i].ind.predictions, *members[j].ind.predictions);
  }
  return sum / static_cast<double>(members.size() - 1);
}

double div_candidate(const Individual& c, const std::vector<ArchiveMember>& snapshot) {
  if (snapshot.empty()) throw Error("div_candidate: empty archive");
  double sum = 0.0;
  for (const auto& member : snapshot)
    sum += disagreement(*c.predictions, *member.ind.predictions);
  return sum / static_cast<double>(snapshot.size());
}

namespace {

// Candidates ranked fittest-first; equal fitness keeps the older individual
// in front so duplicate suppression retains the lowest id.
std::vector<const Individual*> ranked(const std::vector<Individual>& candidates) {
  std::vector<const Individual*> out;
  for (const auto& c : candidates)
    if (c.evaluated() && *c.fitness > 0.0 && c.predictions) out.push_back(&c);
  std::sort(out.begin(), out.end(), [](const Individual* a, const Individual* b) {
    if (*a->fitness != *b->fitness) return *a->fitness > *b->fitness;
    return a->id < b->id;
  });
  return out;
}

void sort_by_cached_keys(std::vector<ArchiveMember>& members) {
  std::sort(members.begin(), members.end(), [](const ArchiveMember& a, const ArchiveMember& b) {
    if (a.divfit != b.divfit) return a.divfit > b.divfit;
    if (*a.ind.fitness != *b.ind.fitness) return *a.ind.fitness > *b.ind.fitness;
    return a.ind.id < b.ind.id;
  });
}

}  // namespace

bool Archive::holds_duplicate(const Individual& c) const {
  for (const auto& member : members_)
    if (member.ind.phenotype == c.phenotype && *member.ind.predictions == *c.predictions)
      return true;
  return false;
}

void Archive::update(const std::vector<Individual>& candidates) {
  auto order = ranked(candidates);

  if (members_.empty()) {
    // First fill: admit purely by fitness, then score diversity among the
    // admitted and re-sort under the combined key.
    for (const Individual* c : order) {
      if (members_.size() >= capacity_) break;
      if (holds_duplicate(*c)) continue;
      members_.push_back(ArchiveMember{*c, 0.0, 0.0});
    }
    for (std::size_t i = 0; i < members_.size(); ++i) {
      members_[i].div = div_member(members_, i);
      members_[i].divfit = divfit_value(members_[i].div, *members_[i].ind.fitness, div_weight_);
    }
    sort_by_cached_keys(members_);
    return;
  }

  std::vector<ArchiveMember> snapshot = members_;
  for (const Individual* c : order) {
    if (holds_duplicate(*c)) continue;
    double div = div_candidate(*c, snapshot);
    members_.push_back(ArchiveMember{*c, div, divfit_value(div, *c->fitness, div_weight_)});
  }
  sort_by_cached_keys(members_);
  if (members_.size() > capacity_) members_.resize(capacity_);
}

std::vector<int> Ensemble::predict(const Matrix& X) const {
  if (members.empty()) throw Error("ensemble: no members");
  std::vector<std::vector<int>> per_member;
  per_member.reserve(members.size());
  int n_classes = 0;
  for (const auto& member : members) {
    per_member.push_back(predict_with(member.models, X));
    for (int p : per_member.back()) n_classes = std::max(n_classes, p + 1);
  }
  std::vector<int> out(X.rows);
  std::vector<double> votes(n_classes);
  for (std::size_t r = 0; r < X.rows; ++r) {
    std::fill(votes.begin(), votes.end(), 0.0);
    for (std::size_t m = 0; m < members.size(); ++m)
      votes[per_member[m][r]] += members[m].weight;
    out[r] = argmax_class(votes);
  }
  return out;
}

nlohmann::json Ensemble::to_json() const {
  nlohmann::json out;
  out["schema_version"] = 1;
  out["metadata"] = metadata;
  out["members"] = nlohmann::json::array();
  for (const auto& member : members) {
    nlohmann::json fitted = nlohmann::json::array();
    for (const auto& model : member.models)
      fitted.push_back({{"algorithm", model->name()},
                        {"schema_version", 1},
                        {"state", model->save_state()}});
    out["members"].push_back({{"workflow", workflow_to_json(member.workflow)},
                              {"fitness", member.fitness},
                              {"weight", member.weight},
                              {"fitted", std::move(fitted)}});
  }
  return out;
}

Ensemble Ensemble::from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != 1)
    throw Error("ensemble: unsupported schema version");
  Ensemble e;
  e.metadata = j.value("metadata", nlohmann::json::object());
  for (const auto& mj : j.at("members")) {
    EnsembleMember member;
    member.workflow = workflow_from_json(mj.at("workflow"));
    member.fitness = mj.at("fitness").get<double>();
    member.weight = mj.at("weight").get<double>();
    const auto& fitted = mj.at("fitted");
    if (fitted.size() != member.workflow.steps.size())
      throw Error("ensemble: fitted step count does not match workflow");
    for (std::size_t s = 0; s < member.workflow.steps.size(); ++s) {
      if (fitted[s].at("algorithm").get<std::string>() != member.workflow.steps[s].algorithm)
        throw Error("ensemble: fitted state order does not match workflow");
      auto model = make_step(member.workflow.steps[s], 0);
      model->load_state(fitted[s].at("state"));
      member.models.push_back(std::move(model));
    }
    e.members.push_back(std::move(member));
  }
  return e;
}

Ensemble build_ensemble(const std::vector<const Individual*>& selected, const Dataset& train,
                        std::uint64_t run_seed, EnsembleWeighting weighting,
                        std::vector<std::string>* warnings) {
  Ensemble e;
  for (const Individual* sel : selected) {
    EnsembleMember member;
    member.workflow = sel->phenotype;
    member.fitness = *sel->fitness;
    try {
      // Refit on the full training set; tag 0 is reserved for full-data fits
      // (cross-validation folds use tags 1..k).
      member.models = fit_workflow(sel->phenotype, train.features, train.labels,
                                   derive_seed(derive_seed(run_seed, sel->id), 0));
    } catch (const std::exception& ex) {
      if (warnings)
        warnings->push_back("ensemble member id=" + std::to_string(sel->id) +
                            " dropped: " + ex.what());
      continue;
    }
    e.members.push_back(std::move(member));
  }
  if (e.members.empty()) throw Error("ensemble: every member failed to refit");

  if (weighting == EnsembleWeighting::FitnessRatio) {
    double best = 0.0;
    for (const auto& member : e.members) best = std::max(best, member.fitness);
    for (auto& member : e.members) member.weight = member.fitness / best;
  } else {
    for (auto& member : e.members) member.weight = 1.0;
  }
  return e;
}

}  // namespace evoflow
