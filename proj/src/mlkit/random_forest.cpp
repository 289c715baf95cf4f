#include <algorithm>
#include <numeric>

#include "evoflow/mlkit_models.hpp"

namespace evoflow {

void RandomForest::fit(const Matrix& X, const std::vector<int>& y) {
  if (X.rows == 0 || X.cols == 0) throw StepFailure("randomForest: empty input");
  n_classes_ = 0;
  for (int label : y) n_classes_ = std::max(n_classes_, label + 1);
  trees_.clear();
  RandomStream rng(seed_);
  std::vector<int> rows(X.rows);
  for (long long t = 0; t < n_estimators_; ++t) {
    if (bootstrap) {
      for (auto& row : rows) row = static_cast<int>(uniform_index(rng, X.rows));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    DecisionTree tree(hp_, derive_seed(seed_, static_cast<std::uint64_t>(t)));
    tree.fit_on(X, y, rows);
    trees_.push_back(std::move(tree));
  }
}

std::vector<int> RandomForest::predict(const Matrix& X) const {
  if (trees_.empty()) throw StepFailure("randomForest: not fitted");
  std::vector<std::vector<int>> per_tree;
  per_tree.reserve(trees_.size());
  for (const auto& tree : trees_) per_tree.push_back(tree.predict(X));
  std::vector<int> out(X.rows);
  std::vector<double> votes(n_classes_);
  for (std::size_t r = 0; r < X.rows; ++r) {
    std::fill(votes.begin(), votes.end(), 0.0);
    for (const auto& preds : per_tree) votes[preds[r]] += 1.0;
    out[r] = argmax_class(votes);
  }
  return out;
}

nlohmann::json RandomForest::save_state() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) trees.push_back(tree.save_state());
  return {{"n_classes", n_classes_}, {"trees", trees}};
}

void RandomForest::load_state(const nlohmann::json& state) {
  n_classes_ = state.at("n_classes").get<int>();
  trees_.clear();
  std::uint64_t t = 0;
  for (const auto& tree_state : state.at("trees")) {
    DecisionTree tree(hp_, derive_seed(seed_, t++));
    tree.load_state(tree_state);
    trees_.push_back(std::move(tree));
  }
}

}  // namespace evoflow
