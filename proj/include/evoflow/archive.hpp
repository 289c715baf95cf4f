#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "evoflow/evaluation.hpp"
#include "evoflow/variation.hpp"

namespace evoflow {

// Fraction of positions where the two prediction vectors differ.
double disagreement(const std::vector<int>& x, const std::vector<int>& y);

double divfit_value(double div, double fitness, double div_weight);

struct ArchiveMember {
  Individual ind;
  double div = 0.0;
  double divfit = 0.0;  // cached at insertion; never recomputed afterwards
};

// Fixed-capacity elite set ordered by diversity-weighted fitness. The first
// fill ranks purely by fitness and then computes diversity among the chosen;
// later updates score each candidate against a snapshot of the archive taken
// when the call starts, so incumbents keep their cached keys.
class Archive {
 public:
  Archive(std::size_t capacity, double div_weight)
      : capacity_(capacity), div_weight_(div_weight) {}

  void update(const std::vector<Individual>& candidates);

  const std::vector<ArchiveMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::size_t capacity() const { return capacity_; }
  double div_weight() const { return div_weight_; }

 private:
  bool holds_duplicate(const Individual& c) const;
  std::size_t capacity_;
  double div_weight_;
  std::vector<ArchiveMember> members_;
};

// Mean disagreement between member i and the rest; 0 for a singleton.
double div_member(const std::vector<ArchiveMember>& members, std::size_t i);
// Mean disagreement between a candidate and every snapshot member.
double div_candidate(const Individual& c, const std::vector<ArchiveMember>& snapshot);

struct EnsembleMember {
  WorkflowSpec workflow;
  double fitness = 0.0;
  double weight = 1.0;
  std::vector<std::unique_ptr<StepModel>> models;  // fitted, pipeline order
};

enum class EnsembleWeighting { FitnessRatio, Uniform };

struct Ensemble {
  std::vector<EnsembleMember> members;
  nlohmann::json metadata;  // seed, grammar hash, config echo, class names, ...

  std::vector<int> predict(const Matrix& X) const;
  nlohmann::json to_json() const;
  static Ensemble from_json(const nlohmann::json& j);
};

// Refits each selected individual's workflow on the full training set.
// weights are fitness / best fitness (FitnessRatio) or all 1 (Uniform);
// members that fail to refit are dropped with a warning and weights are
// recomputed from the survivors. Throws Error if nobody survives.
Ensemble build_ensemble(const std::vector<const Individual*>& selected, const Dataset& train,
                        std::uint64_t run_seed, EnsembleWeighting weighting,
                        std::vector<std::string>* warnings = nullptr);

}  // namespace evoflow
