#include <algorithm>
#include <map>

#include "evoflow/evaluation.hpp"
#include "evoflow/errors.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

void Dataset::validate() const {
  if (features.rows != labels.size())
    throw DataError("dataset: " + std::to_string(features.rows) + " rows but " +
                    std::to_string(labels.size()) + " labels");
  if (features.rows == 0) throw DataError("dataset: empty");
  if (class_names.size() < 2) throw DataError("dataset: needs at least 2 classes");
  for (int label : labels)
    if (label < 0 || label >= n_classes())
      throw DataError("dataset: label " + std::to_string(label) + " outside 0.." +
                      std::to_string(n_classes() - 1));
  if (feature_names.size() != features.cols)
    throw DataError("dataset: feature name count mismatch");
}

Deadline Deadline::after(double seconds) {
  Deadline d;
  d.unlimited = false;
  d.at = std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
             std::chrono::duration<double>(seconds));
  return d;
}

bool Deadline::passed() const {
  return !unlimited && std::chrono::steady_clock::now() >= at;
}

std::vector<std::vector<int>> stratified_kfold(const std::vector<int>& labels, int k,
                                               std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold: k must be at least 2");
  if (static_cast<std::size_t>(k) > labels.size())
    throw ConfigError("k-fold: k=" + std::to_string(k) + " exceeds " +
                      std::to_string(labels.size()) + " samples");
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<int>(i));

  std::vector<std::vector<int>> folds(k);
  // The starting fold rotates with the running total so small classes spread
  // across folds instead of piling into fold 0.
  std::size_t dealt = 0;
  for (auto& [cls, rows] : by_class) {
    RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t i = 0; i < rows.size(); ++i)
      folds[(dealt + i) % k].push_back(rows[i]);
    dealt += rows.size();
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::vector<std::unique_ptr<StepModel>> fit_workflow(const WorkflowSpec& wf, const Matrix& X,
                                                     const std::vector<int>& y,
                                                     std::uint64_t seed,
                                                     const Deadline& deadline) {
  std::vector<std::unique_ptr<StepModel>> models;
  Matrix cur = X;
  for (std::size_t s = 0; s < wf.steps.size(); ++s) {
    if (deadline.passed()) throw DeadlineExceeded{};
    auto model = make_step(wf.steps[s], derive_seed(seed, s + 1));
    model->fit(cur, y);
    if (model->role() == StepRole::Preprocessing) cur = model->transform(cur);
    models.push_back(std::move(model));
  }
  return models;
}

std::vector<int> predict_with(const std::vector<std::unique_ptr<StepModel>>& models,
                              const Matrix& X, const Deadline& deadline) {
  Matrix cur = X;
  for (const auto& model : models) {
    if (deadline.passed()) throw DeadlineExceeded{};
    if (model->role() == StepRole::Preprocessing)
      cur = model->transform(cur);
    else
      return model->predict(cur);
  }
  throw StepFailure("workflow has no classifier");
}

EvalResult evaluate_workflow(const WorkflowSpec& wf, const Dataset& train,
                             const std::vector<std::vector<int>>& folds,
                             std::uint64_t eval_seed, double eval_budget_s) {
  auto start = std::chrono::steady_clock::now();
  auto finish = [&](EvalResult r) {
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  Deadline deadline = eval_budget_s > 0 ? Deadline::after(eval_budget_s) : Deadline::never();

  EvalResult result;
  result.predictions.assign(train.labels.size(), -1);
  try {
    for (std::size_t f = 0; f < folds.size(); ++f) {
      if (deadline.passed()) throw DeadlineExceeded{};
      std::vector<char> held(train.labels.size(), 0);
      for (int row : folds[f]) held[row] = 1;
      std::vector<int> fit_rows;
      fit_rows.reserve(train.labels.size() - folds[f].size());
      for (std::size_t i = 0; i < held.size(); ++i)
        if (!held[i]) fit_rows.push_back(static_cast<int>(i));

      Matrix fit_x = train.features.select_rows(fit_rows);
      std::vector<int> fit_y(fit_rows.size());
      for (std::size_t i = 0; i < fit_rows.size(); ++i) fit_y[i] = train.labels[fit_rows[i]];

      auto models = fit_workflow(wf, fit_x, fit_y, derive_seed(eval_seed, f + 1), deadline);
      auto preds = predict_with(models, train.features.select_rows(folds[f]), deadline);
      for (std::size_t i = 0; i < folds[f].size(); ++i)
        result.predictions[folds[f][i]] = preds[i];
    }
    result.fitness = balanced_accuracy(train.labels, result.predictions);
  } catch (const DeadlineExceeded&) {
    result.fitness = 0.0;
    result.predictions.clear();
    result.timed_out = true;
    result.note = "timed out";
    return finish(std::move(result));
  } catch (const std::exception& e) {
    result.fitness = 0.0;
    result.predictions.clear();
    result.note = e.what();
    return finish(std::move(result));
  }
  return finish(std::move(result));
}

namespace {
struct Confusion {
  // per-class true-positive / actual / predicted counts
  std::vector<double> tp, actual, predicted;
  explicit Confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw DataError("metric: length mismatch");
    if (y_true.empty()) throw DataError("metric: empty input");
    int k = 0;
    for (int v : y_true) k = std::max(k, v + 1);
    for (int v : y_pred) k = std::max(k, v + 1);
    tp.assign(k, 0.0);
    actual.assign(k, 0.0);
    predicted.assign(k, 0.0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      actual[y_true[i]] += 1.0;
      predicted[y_pred[i]] += 1.0;
      if (y_true[i] == y_pred[i]) tp[y_true[i]] += 1.0;
    }
  }
};
}  // namespace

double balanced_accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  Confusion c(y_true, y_pred);
  double sum = 0.0;
  int present = 0;
  for (std::size_t k = 0; k < c.actual.size(); ++k) {
    if (c.actual[k] == 0.0) continue;  // classes absent from y_true don't count
    sum += c.tp[k] / c.actual[k];
    ++present;
  }
  return sum / present;
}

double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  Confusion c(y_true, y_pred);
  double sum = 0.0;
  int present = 0;
  for (std::size_t k = 0; k < c.actual.size(); ++k) {
    if (c.actual[k] == 0.0) continue;
    double precision = c.predicted[k] > 0.0 ? c.tp[k] / c.predicted[k] : 0.0;
    double recall = c.tp[k] / c.actual[k];
    sum += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    ++present;
  }
  return sum / present;
}

double holdout_loss(const WorkflowSpec& wf, const Dataset& train, const Dataset& valid,
                    std::uint64_t seed) {
  auto models = fit_workflow(wf, train.features, train.labels, seed);
  auto preds = predict_with(models, valid.features);
  return 1.0 - balanced_accuracy(valid.labels, preds);
}

}  // namespace evoflow
