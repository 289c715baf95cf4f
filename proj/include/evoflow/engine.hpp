#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evoflow/archive.hpp"
#include "evoflow/evaluation.hpp"
#include "evoflow/grammar.hpp"
#include "evoflow/variation.hpp"

namespace evoflow {

enum class Mode { Full, Basic, OpOnly, EnsOnly, Top10, Top10W, BestSingle };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);  // throws ConfigError
std::vector<std::string> mode_names();

struct EngineConfig {
  int max_gen = 100;
  int pop_size = 100;
  double cx_prob = 0.8;
  double st_mut_prob = 0.2;
  int max_der = 13;
  int arch_size = 10;
  double div_weight = 0.2;
  double budget_s = 3600.0;
  double eval_budget_s = 360.0;  // config loading defaults this to budget/10
  int k_folds = 5;
  std::uint64_t seed = 1;
  Mode mode = Mode::Full;
  int threads = 1;

  void validate() const;  // throws ConfigError

  // Mode-derived behavior: the workflow-aware operator pair vs. the standard
  // G3P pair, and the archive's effective diversity weight.
  bool specific_operators() const;
  double effective_div_weight() const;
  bool best_single_output() const;
  EnsembleWeighting weighting() const;
};

struct GenerationRecord {
  int gen = 0;  // 1-based; the initial population is not a generation
  double best_fit = 0.0;
  double mean_fit = 0.0;
  double archive_min_divfit = 0.0;
  double elapsed_s = 0.0;
};

struct RunReport {
  std::vector<GenerationRecord> generations;
  double wall_clock_s = 0.0;
  std::string termination_reason;  // "generations" | "budget"
  int n_evaluations = 0;
  double best_fitness = 0.0;
  std::string best_workflow;
  std::uint64_t grammar_hash = 0;
};

struct RunOutput {
  Archive archive;
  RunReport report;
};

// The main search loop: random init, k-fold fitness, tournament selection,
// pairwise crossover, per-individual mutation, diversity-archive update,
// cooperative wall-clock budget.
RunOutput run_search(const EngineConfig& cfg, const Grammar& g, const Dataset& train);

// Refits the mode's selection of archive members on the full training set.
Ensemble finalize_ensemble(const Archive& arch, const EngineConfig& cfg, const Dataset& train,
                           std::vector<std::string>* warnings = nullptr);

}  // namespace evoflow
