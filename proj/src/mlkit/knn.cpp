#include <algorithm>
#include <cmath>

#include "evoflow/mlkit_models.hpp"

namespace evoflow {

void Knn::fit(const Matrix& X, const std::vector<int>& y) {
  if (X.rows == 0 || X.cols == 0) throw StepFailure("kNN: empty input");
  train_x_ = X;
  train_y_ = y;
}

std::vector<int> Knn::predict(const Matrix& X) const {
  if (X.cols != train_x_.cols) throw StepFailure("kNN: feature count changed");
  std::size_t n_train = train_x_.rows;
  auto k = static_cast<std::size_t>(n_neighbors_);
  k = std::min(k, n_train);

  int n_classes = 0;
  for (int label : train_y_) n_classes = std::max(n_classes, label + 1);

  std::vector<int> out(X.rows);
  std::vector<std::pair<double, int>> dist(n_train);
  for (std::size_t r = 0; r < X.rows; ++r) {
    for (std::size_t t = 0; t < n_train; ++t) {
      double s = 0.0;
      for (std::size_t c = 0; c < X.cols; ++c) {
        double d = std::abs(X.at(r, c) - train_x_.at(t, c));
        s += p_ == 1 ? d : d * d;
      }
      dist[t] = {p_ == 1 ? s : std::sqrt(s), static_cast<int>(t)};
    }
    // Distance ties resolve toward the lower training-sample index.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());

    std::vector<double> votes(n_classes, 0.0);
    if (weights_ == "uniform") {
      for (std::size_t i = 0; i < k; ++i) votes[train_y_[dist[i].second]] += 1.0;
    } else if (weights_ == "distance") {
      bool any_zero = false;
      for (std::size_t i = 0; i < k && !any_zero; ++i) any_zero = dist[i].first == 0.0;
      if (any_zero) {
        // Exact matches dominate: vote only among zero-distance neighbors.
        for (std::size_t i = 0; i < k; ++i)
          if (dist[i].first == 0.0) votes[train_y_[dist[i].second]] += 1.0;
      } else {
        for (std::size_t i = 0; i < k; ++i)
          votes[train_y_[dist[i].second]] += 1.0 / dist[i].first;
      }
    } else {
      throw StepFailure("kNN: unknown weights '" + weights_ + "'");
    }
    out[r] = argmax_class(votes);
  }
  return out;
}

nlohmann::json Knn::save_state() const {
  return {{"x", matrix_to_json(train_x_)}, {"y", train_y_}};
}

void Knn::load_state(const nlohmann::json& state) {
  train_x_ = matrix_from_json(state.at("x"));
  train_y_ = state.at("y").get<std::vector<int>>();
}

}  // namespace evoflow
