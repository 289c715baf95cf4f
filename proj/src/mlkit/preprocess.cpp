#include <algorithm>
#include <cmath>
#include <limits>

#include "evoflow/mlkit_models.hpp"

namespace evoflow {

namespace {

void check_nonempty(const Matrix& X, const std::string& who) {
  if (X.rows == 0 || X.cols == 0) throw StepFailure(who + ": empty input");
}

std::vector<double> column_variances(const Matrix& X) {
  std::vector<double> var(X.cols, 0.0);
  for (std::size_t c = 0; c < X.cols; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < X.rows; ++r) mean += X.at(r, c);
    mean /= static_cast<double>(X.rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < X.rows; ++r) {
      double d = X.at(r, c) - mean;
      ss += d * d;
    }
    var[c] = ss / static_cast<double>(X.rows);
  }
  return var;
}

}  // namespace

// ---- MinMaxScaler --------------------------------------------------------

void MinMaxScaler::fit(const Matrix& X, const std::vector<int>&) {
  check_nonempty(X, name());
  min_.assign(X.cols, std::numeric_limits<double>::infinity());
  std::vector<double> max(X.cols, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < X.rows; ++r)
    for (std::size_t c = 0; c < X.cols; ++c) {
      min_[c] = std::min(min_[c], X.at(r, c));
      max[c] = std::max(max[c], X.at(r, c));
    }
  range_.resize(X.cols);
  for (std::size_t c = 0; c < X.cols; ++c) range_[c] = max[c] - min_[c];
}

Matrix MinMaxScaler::transform(const Matrix& X) const {
  if (X.cols != min_.size()) throw StepFailure("minMaxScaler: feature count changed");
  Matrix out(X.rows, X.cols);
  for (std::size_t r = 0; r < X.rows; ++r)
    for (std::size_t c = 0; c < X.cols; ++c)
      out.at(r, c) = range_[c] == 0.0 ? 0.0 : (X.at(r, c) - min_[c]) / range_[c];
  return out;
}

nlohmann::json MinMaxScaler::save_state() const {
  return {{"min", min_}, {"range", range_}};
}

void MinMaxScaler::load_state(const nlohmann::json& state) {
  min_ = state.at("min").get<std::vector<double>>();
  range_ = state.at("range").get<std::vector<double>>();
}

// ---- VarianceThreshold ---------------------------------------------------

void VarianceThreshold::fit(const Matrix& X, const std::vector<int>&) {
  check_nonempty(X, name());
  auto var = column_variances(X);
  keep_.clear();
  for (std::size_t c = 0; c < X.cols; ++c)
    if (var[c] > threshold_) keep_.push_back(static_cast<int>(c));
  if (keep_.empty())
    throw StepFailure("varianceThreshold dropped every feature");
}

Matrix VarianceThreshold::transform(const Matrix& X) const {
  return X.select_cols(keep_);
}

nlohmann::json VarianceThreshold::save_state() const { return {{"keep", keep_}}; }

void VarianceThreshold::load_state(const nlohmann::json& state) {
  keep_ = state.at("keep").get<std::vector<int>>();
}

// ---- Normalizer ----------------------------------------------------------

Matrix Normalizer::transform(const Matrix& X) const {
  Matrix out = X;
  for (std::size_t r = 0; r < X.rows; ++r) {
    double n = 0.0;
    if (norm_ == "l1") {
      for (std::size_t c = 0; c < X.cols; ++c) n += std::abs(X.at(r, c));
    } else if (norm_ == "l2") {
      for (std::size_t c = 0; c < X.cols; ++c) n += X.at(r, c) * X.at(r, c);
      n = std::sqrt(n);
    } else if (norm_ == "max") {
      for (std::size_t c = 0; c < X.cols; ++c) n = std::max(n, std::abs(X.at(r, c)));
    } else {
      throw StepFailure("normalizer: unknown norm '" + norm_ + "'");
    }
    if (n == 0.0) continue;  // zero-norm rows pass through unchanged
    for (std::size_t c = 0; c < X.cols; ++c) out.at(r, c) = X.at(r, c) / n;
  }
  return out;
}

nlohmann::json Normalizer::save_state() const { return {{"norm", norm_}}; }

void Normalizer::load_state(const nlohmann::json& state) {
  norm_ = state.at("norm").get<std::string>();
}

// ---- SelectPercentile ----------------------------------------------------

std::vector<double> SelectPercentile::anova_f_scores(const Matrix& X,
                                                     const std::vector<int>& y) {
  int n_classes = 0;
  for (int label : y) n_classes = std::max(n_classes, label + 1);
  std::vector<int> counts(n_classes, 0);
  for (int label : y) ++counts[label];
  int present = 0;
  for (int c : counts) present += c > 0 ? 1 : 0;

  std::vector<double> scores(X.cols, 0.0);
  auto n = static_cast<double>(X.rows);
  for (std::size_t f = 0; f < X.cols; ++f) {
    double grand = 0.0;
    std::vector<double> class_sum(n_classes, 0.0);
    for (std::size_t r = 0; r < X.rows; ++r) {
      grand += X.at(r, f);
      class_sum[y[r]] += X.at(r, f);
    }
    grand /= n;
    double ss_between = 0.0, ss_within = 0.0;
    for (int c = 0; c < n_classes; ++c) {
      if (counts[c] == 0) continue;
      double mean_c = class_sum[c] / counts[c];
      double d = mean_c - grand;
      ss_between += counts[c] * d * d;
    }
    for (std::size_t r = 0; r < X.rows; ++r) {
      double d = X.at(r, f) - class_sum[y[r]] / counts[y[r]];
      ss_within += d * d;
    }
    if (present < 2 || n <= present) {
      scores[f] = 0.0;
    } else if (ss_within <= 0.0) {
      scores[f] = std::numeric_limits<double>::infinity();
    } else {
      scores[f] = (ss_between / (present - 1)) / (ss_within / (n - present));
    }
  }
  return scores;
}

void SelectPercentile::fit(const Matrix& X, const std::vector<int>& y) {
  check_nonempty(X, name());
  auto scores = anova_f_scores(X, y);
  std::vector<int> order(X.cols);
  for (std::size_t i = 0; i < X.cols; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  auto n_keep = static_cast<std::size_t>(
      std::max<long long>(1, static_cast<long long>(X.cols) * percentile_ / 100));
  n_keep = std::min(n_keep, X.cols);
  keep_.assign(order.begin(), order.begin() + static_cast<long>(n_keep));
  std::sort(keep_.begin(), keep_.end());  // preserve original feature order
}

Matrix SelectPercentile::transform(const Matrix& X) const {
  return X.select_cols(keep_);
}

nlohmann::json SelectPercentile::save_state() const { return {{"keep", keep_}}; }

void SelectPercentile::load_state(const nlohmann::json& state) {
  keep_ = state.at("keep").get<std::vector<int>>();
}

}  // namespace evoflow
