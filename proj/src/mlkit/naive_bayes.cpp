#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "evoflow/mlkit_models.hpp"

namespace evoflow {

namespace {

std::vector<int> present_classes(const std::vector<int>& y) {
  std::map<int, int> counts;
  for (int label : y) ++counts[label];
  std::vector<int> classes;
  for (const auto& [cls, n] : counts) classes.push_back(cls);
  return classes;
}

std::vector<int> jll_argmax(const Matrix& jll, const std::vector<int>& classes) {
  std::vector<int> out(jll.rows);
  for (std::size_t r = 0; r < jll.rows; ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < jll.cols; ++c)
      if (jll.at(r, c) > jll.at(r, best)) best = c;
    out[r] = classes[best];
  }
  return out;
}

Matrix jll_softmax(const Matrix& jll) {
  Matrix p(jll.rows, jll.cols);
  for (std::size_t r = 0; r < jll.rows; ++r) {
    double mx = jll.at(r, 0);
    for (std::size_t c = 1; c < jll.cols; ++c) mx = std::max(mx, jll.at(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < jll.cols; ++c) {
      p.at(r, c) = std::exp(jll.at(r, c) - mx);
      sum += p.at(r, c);
    }
    for (std::size_t c = 0; c < jll.cols; ++c) p.at(r, c) /= sum;
  }
  return p;
}

}  // namespace

// ---- GaussianNb ----------------------------------------------------------

void GaussianNb::fit(const Matrix& X, const std::vector<int>& y) {
  if (X.rows == 0 || X.cols == 0) throw StepFailure("gaussianNB: empty input");
  classes_ = present_classes(y);
  std::size_t k = classes_.size(), d = X.cols;
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index[classes_[i]] = i;

  std::vector<double> count(k, 0.0);
  mean_ = Matrix(k, d);
  var_ = Matrix(k, d);
  for (std::size_t r = 0; r < X.rows; ++r) {
    std::size_t c = index[y[r]];
    count[c] += 1.0;
    for (std::size_t f = 0; f < d; ++f) mean_.at(c, f) += X.at(r, f);
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t f = 0; f < d; ++f) mean_.at(c, f) /= count[c];
  for (std::size_t r = 0; r < X.rows; ++r) {
    std::size_t c = index[y[r]];
    for (std::size_t f = 0; f < d; ++f) {
      double diff = X.at(r, f) - mean_.at(c, f);
      var_.at(c, f) += diff * diff;
    }
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t f = 0; f < d; ++f) var_.at(c, f) /= count[c];

  // Smooth with a fraction of the widest feature's variance.
  double max_var = 0.0;
  for (std::size_t f = 0; f < d; ++f) {
    double m = 0.0, ss = 0.0;
    for (std::size_t r = 0; r < X.rows; ++r) m += X.at(r, f);
    m /= static_cast<double>(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) {
      double diff = X.at(r, f) - m;
      ss += diff * diff;
    }
    max_var = std::max(max_var, ss / static_cast<double>(X.rows));
  }
  double eps = var_smoothing_ * max_var;
  if (eps <= 0.0) eps = 1e-12;  // fully constant data still needs a floor
  for (auto& v : var_.values) v += eps;

  log_prior_.resize(k);
  for (std::size_t c = 0; c < k; ++c)
    log_prior_[c] = std::log(count[c] / static_cast<double>(X.rows));
}

Matrix GaussianNb::joint_log_likelihood(const Matrix& X) const {
  std::size_t k = classes_.size();
  Matrix jll(X.rows, k);
  for (std::size_t r = 0; r < X.rows; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      double s = log_prior_[c];
      for (std::size_t f = 0; f < X.cols; ++f) {
        double v = var_.at(c, f);
        double diff = X.at(r, f) - mean_.at(c, f);
        s += -0.5 * std::log(2.0 * std::numbers::pi * v) - diff * diff / (2.0 * v);
      }
      jll.at(r, c) = s;
    }
  return jll;
}

std::vector<int> GaussianNb::predict(const Matrix& X) const {
  if (X.cols != mean_.cols) throw StepFailure("gaussianNB: feature count changed");
  return jll_argmax(joint_log_likelihood(X), classes_);
}

Matrix GaussianNb::predict_proba(const Matrix& X) const {
  return jll_softmax(joint_log_likelihood(X));
}

nlohmann::json GaussianNb::save_state() const {
  return {{"classes", classes_},
          {"log_prior", log_prior_},
          {"mean", matrix_to_json(mean_)},
          {"var", matrix_to_json(var_)}};
}

void GaussianNb::load_state(const nlohmann::json& state) {
  classes_ = state.at("classes").get<std::vector<int>>();
  log_prior_ = state.at("log_prior").get<std::vector<double>>();
  mean_ = matrix_from_json(state.at("mean"));
  var_ = matrix_from_json(state.at("var"));
}

// ---- BernoulliNb ---------------------------------------------------------

void BernoulliNb::fit(const Matrix& X, const std::vector<int>& y) {
  if (X.rows == 0 || X.cols == 0) throw StepFailure("bernouilliNB: empty input");
  classes_ = present_classes(y);
  std::size_t k = classes_.size(), d = X.cols;
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index[classes_[i]] = i;

  std::vector<double> count(k, 0.0);
  Matrix ones(k, d);
  for (std::size_t r = 0; r < X.rows; ++r) {
    std::size_t c = index[y[r]];
    count[c] += 1.0;
    for (std::size_t f = 0; f < d; ++f)
      if (X.at(r, f) > 0.0) ones.at(c, f) += 1.0;  // binarize at 0
  }
  log_theta_ = Matrix(k, d);
  log_one_minus_theta_ = Matrix(k, d);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t f = 0; f < d; ++f) {
      double theta = (ones.at(c, f) + alpha_) / (count[c] + 2.0 * alpha_);
      log_theta_.at(c, f) = std::log(theta);
      log_one_minus_theta_.at(c, f) = std::log(1.0 - theta);
    }
  log_prior_.resize(k);
  for (std::size_t c = 0; c < k; ++c)
    log_prior_[c] = fit_prior_ ? std::log(count[c] / static_cast<double>(X.rows))
                               : -std::log(static_cast<double>(k));
}

Matrix BernoulliNb::joint_log_likelihood(const Matrix& X) const {
  std::size_t k = classes_.size();
  Matrix jll(X.rows, k);
  for (std::size_t r = 0; r < X.rows; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      double s = log_prior_[c];
      for (std::size_t f = 0; f < X.cols; ++f)
        s += X.at(r, f) > 0.0 ? log_theta_.at(c, f) : log_one_minus_theta_.at(c, f);
      jll.at(r, c) = s;
    }
  return jll;
}

std::vector<int> BernoulliNb::predict(const Matrix& X) const {
  if (X.cols != log_theta_.cols) throw StepFailure("bernouilliNB: feature count changed");
  return jll_argmax(joint_log_likelihood(X), classes_);
}

Matrix BernoulliNb::predict_proba(const Matrix& X) const {
  return jll_softmax(joint_log_likelihood(X));
}

nlohmann::json BernoulliNb::save_state() const {
  return {{"classes", classes_},
          {"log_prior", log_prior_},
          {"log_theta", matrix_to_json(log_theta_)},
          {"log_one_minus_theta", matrix_to_json(log_one_minus_theta_)}};
}

void BernoulliNb::load_state(const nlohmann::json& state) {
  classes_ = state.at("classes").get<std::vector<int>>();
  log_prior_ = state.at("log_prior").get<std::vector<double>>();
  log_theta_ = matrix_from_json(state.at("log_theta"));
  log_one_minus_theta_ = matrix_from_json(state.at("log_one_minus_theta"));
}

}  // namespace evoflow
