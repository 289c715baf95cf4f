#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "evoflow/encoding.hpp"
#include "evoflow/matrix.hpp"
#include "evoflow/mlkit.hpp"

namespace evoflow {

struct Dataset {
  Matrix features;
  std::vector<int> labels;                  // class ids 0..K-1
  std::vector<std::string> class_names;     // index = class id
  std::vector<std::string> feature_names;
  int n_classes() const { return static_cast<int>(class_names.size()); }
  void validate() const;  // throws DataError on shape/label problems
};

struct EvalResult {
  double fitness = 0.0;
  std::vector<int> predictions;  // out-of-fold, indexed by training row
  double elapsed_s = 0.0;
  bool timed_out = false;
  std::string note;  // failure reason when fitness was forced to 0
};

// Wall-clock cutoff checked cooperatively between steps and folds.
struct Deadline {
  std::chrono::steady_clock::time_point at{};
  bool unlimited = true;
  static Deadline never() { return Deadline{}; }
  static Deadline after(double seconds);
  bool passed() const;
};

// Deterministic stratified fold assignment: samples of each class are
// shuffled with a class-derived stream, then dealt round-robin starting at
// the fold after the previous class's last deal.
std::vector<std::vector<int>> stratified_kfold(const std::vector<int>& labels, int k,
                                               std::uint64_t seed);

// Fits every step left to right on (X, y): preprocessing steps transform the
// running matrix, the classifier consumes the final one. Throws StepFailure on
// step errors and DeadlineExceeded past the deadline.
struct DeadlineExceeded {};
std::vector<std::unique_ptr<StepModel>> fit_workflow(const WorkflowSpec& wf, const Matrix& X,
                                                     const std::vector<int>& y,
                                                     std::uint64_t seed,
                                                     const Deadline& deadline = Deadline::never());
std::vector<int> predict_with(const std::vector<std::unique_ptr<StepModel>>& models,
                              const Matrix& X, const Deadline& deadline = Deadline::never());

// k-fold cross-validated fitness with a per-individual budget. All failure
// modes (timeout, step failure) fold into fitness 0 with a note.
EvalResult evaluate_workflow(const WorkflowSpec& wf, const Dataset& train,
                             const std::vector<std::vector<int>>& folds,
                             std::uint64_t eval_seed, double eval_budget_s);

double balanced_accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred);
double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// 1 - balanced accuracy of the workflow fitted on train, scored on valid.
double holdout_loss(const WorkflowSpec& wf, const Dataset& train, const Dataset& valid,
                    std::uint64_t seed);

}  // namespace evoflow
