#include <algorithm>
#include <cmath>
#include <numeric>

#include "evoflow/mlkit_models.hpp"

namespace evoflow {

namespace {

double impurity(const std::vector<double>& counts, double n, bool gini) {
  double out = gini ? 1.0 : 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    double p = c / n;
    if (gini)
      out -= p * p;
    else
      out -= p * std::log2(p);
  }
  return out;
}

// Majority label; on a tie, keep the parent's majority when it is among the
// tied classes, otherwise fall back to the lowest class id.
int leaf_label(const std::vector<double>& counts, int parent_majority) {
  double best = *std::max_element(counts.begin(), counts.end());
  if (parent_majority >= 0 && counts[parent_majority] == best) return parent_majority;
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == best) return static_cast<int>(c);
  return 0;
}

}  // namespace

void DecisionTree::fit(const Matrix& X, const std::vector<int>& y) {
  std::vector<int> rows(X.rows);
  std::iota(rows.begin(), rows.end(), 0);
  fit_on(X, y, rows);
}

void DecisionTree::fit_on(const Matrix& X, const std::vector<int>& y,
                          const std::vector<int>& rows) {
  if (rows.empty() || X.cols == 0) throw StepFailure("decisionTree: empty input");
  int n_classes = 0;
  for (int row : rows) n_classes = std::max(n_classes, y[row] + 1);
  nodes_.clear();
  RandomStream rng(seed_);
  std::vector<int> work(rows);
  build(X, y, work, 0, -1, n_classes, rng);
}

int DecisionTree::build(const Matrix& X, const std::vector<int>& y, std::vector<int>& rows,
                        int depth, int parent_majority, int n_classes, RandomStream& rng) {
  std::vector<double> counts(n_classes, 0.0);
  for (int row : rows) counts[y[row]] += 1.0;
  double n = static_cast<double>(rows.size());
  int majority = leaf_label(counts, parent_majority);

  int idx = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{-1, 0.0, -1, -1, majority});

  bool pure = counts[majority] == n;
  if (pure || rows.size() < 2 || depth >= hp_.max_depth) return idx;

  auto d = static_cast<int>(X.cols);
  std::vector<int> features(d);
  std::iota(features.begin(), features.end(), 0);
  int n_sub = d;
  if (hp_.max_features == "sqrt")
    n_sub = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
  else if (hp_.max_features == "log2")
    n_sub = std::max(1, static_cast<int>(std::log2(static_cast<double>(d))));
  else if (hp_.max_features != "all")
    throw StepFailure("decisionTree: unknown maxFeatures '" + hp_.max_features + "'");
  if (n_sub < d) {
    for (int i = 0; i < n_sub; ++i) {
      std::size_t j = i + uniform_index(rng, d - i);
      std::swap(features[i], features[j]);
    }
    features.resize(n_sub);
    std::sort(features.begin(), features.end());
  }

  bool gini = hp_.criterion == "gini";
  if (!gini && hp_.criterion != "entropy")
    throw StepFailure("decisionTree: unknown criterion '" + hp_.criterion + "'");
  double parent_imp = impurity(counts, n, gini);

  // Best split over candidate thresholds (midpoints between adjacent distinct
  // values); exact-equal gains keep the earlier feature / lower threshold.
  double best_gain = 0.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  std::vector<std::pair<double, int>> vals(rows.size());
  std::vector<double> left(n_classes);
  for (int f : features) {
    for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = {X.at(rows[i], f), y[rows[i]]};
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::fill(left.begin(), left.end(), 0.0);
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      left[vals[i].second] += 1.0;
      if (vals[i].first == vals[i + 1].first) continue;
      double nl = static_cast<double>(i + 1), nr = n - nl;
      std::vector<double> right(n_classes);
      for (int c = 0; c < n_classes; ++c) right[c] = counts[c] - left[c];
      double gain =
          parent_imp - (nl / n) * impurity(left, nl, gini) - (nr / n) * impurity(right, nr, gini);
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = f;
        best_threshold = (vals[i].first + vals[i + 1].first) / 2.0;
      }
    }
  }
  if (best_feature < 0 || best_gain <= 1e-12) return idx;

  std::vector<int> left_rows, right_rows;
  for (int row : rows)
    (X.at(row, best_feature) <= best_threshold ? left_rows : right_rows).push_back(row);
  int l = build(X, y, left_rows, depth + 1, majority, n_classes, rng);
  int r = build(X, y, right_rows, depth + 1, majority, n_classes, rng);
  nodes_[idx] = Node{best_feature, best_threshold, l, r, majority};
  return idx;
}

std::vector<int> DecisionTree::predict(const Matrix& X) const {
  if (nodes_.empty()) throw StepFailure("decisionTree: not fitted");
  std::vector<int> out(X.rows);
  for (std::size_t r = 0; r < X.rows; ++r) {
    const Node* node = &nodes_[0];
    while (node->feature >= 0) {
      if (static_cast<std::size_t>(node->feature) >= X.cols)
        throw StepFailure("decisionTree: feature count changed");
      node = &nodes_[X.at(r, node->feature) <= node->threshold ? node->left : node->right];
    }
    out[r] = node->cls;
  }
  return out;
}

nlohmann::json DecisionTree::save_state() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& node : nodes_)
    nodes.push_back({node.feature, node.threshold, node.left, node.right, node.cls});
  return {{"nodes", nodes}};
}

void DecisionTree::load_state(const nlohmann::json& state) {
  nodes_.clear();
  for (const auto& row : state.at("nodes"))
    nodes_.push_back(Node{row.at(0).get<int>(), row.at(1).get<double>(), row.at(2).get<int>(),
                          row.at(3).get<int>(), row.at(4).get<int>()});
}

}  // namespace evoflow
