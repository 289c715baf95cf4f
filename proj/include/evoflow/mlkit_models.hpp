#pragma once

#include "evoflow/mlkit.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

class MinMaxScaler final : public StepModel {
 public:
  std::string name() const override { return "minMaxScaler"; }
  StepRole role() const override { return StepRole::Preprocessing; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  Matrix transform(const Matrix& X) const override;  // constant features map to 0
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

 private:
  std::vector<double> min_, range_;
};

class VarianceThreshold final : public StepModel {
 public:
  explicit VarianceThreshold(double threshold) : threshold_(threshold) {}
  std::string name() const override { return "varianceThreshold"; }
  StepRole role() const override { return StepRole::Preprocessing; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  Matrix transform(const Matrix& X) const override;
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;
  const std::vector<int>& kept() const { return keep_; }

 private:
  double threshold_;
  std::vector<int> keep_;
};

class Normalizer final : public StepModel {
 public:
  explicit Normalizer(std::string norm) : norm_(std::move(norm)) {}
  std::string name() const override { return "normalizer"; }
  StepRole role() const override { return StepRole::Preprocessing; }
  void fit(const Matrix& X, const std::vector<int>& y) override {}
  Matrix transform(const Matrix& X) const override;  // zero-norm rows pass through
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

 private:
  std::string norm_;  // l1 | l2 | max
};

class SelectPercentile final : public StepModel {
 public:
  explicit SelectPercentile(long long percentile) : percentile_(percentile) {}
  std::string name() const override { return "selectPercentile"; }
  StepRole role() const override { return StepRole::Preprocessing; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  Matrix transform(const Matrix& X) const override;
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;
  const std::vector<int>& kept() const { return keep_; }
  static std::vector<double> anova_f_scores(const Matrix& X, const std::vector<int>& y);

 private:
  long long percentile_;
  std::vector<int> keep_;
};

class Pca final : public StepModel {
 public:
  Pca(bool whiten, long long n_components) : whiten_(whiten), requested_(n_components) {}
  std::string name() const override { return "pca"; }
  StepRole role() const override { return StepRole::Preprocessing; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  Matrix transform(const Matrix& X) const override;
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;
  const Matrix& components() const { return components_; }  // k x d, orthonormal rows
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  bool whiten_;
  long long requested_;
  std::vector<double> mean_;
  Matrix components_;
  std::vector<double> eigenvalues_;
};

// Random Fourier features approximating the RBF kernel exp(-gamma*|x-y|^2).
class RbfSampler final : public StepModel {
 public:
  RbfSampler(double gamma, long long n_components, std::uint64_t seed)
      : gamma_(gamma), n_components_(n_components), seed_(seed) {}
  std::string name() const override { return "rbfSampler"; }
  StepRole role() const override { return StepRole::Preprocessing; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  Matrix transform(const Matrix& X) const override;
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

 private:
  double gamma_;
  long long n_components_;
  std::uint64_t seed_;
  Matrix omega_;  // d x n
  std::vector<double> offset_;
};

class Knn final : public StepModel {
 public:
  Knn(long long n_neighbors, std::string weights, long long p)
      : n_neighbors_(n_neighbors), weights_(std::move(weights)), p_(p) {}
  std::string name() const override { return "kNN"; }
  StepRole role() const override { return StepRole::Classifier; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  std::vector<int> predict(const Matrix& X) const override;
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

 private:
  long long n_neighbors_;
  std::string weights_;  // uniform | distance
  long long p_;          // Minkowski order: 1 or 2
  Matrix train_x_;
  std::vector<int> train_y_;
};

class GaussianNb final : public StepModel {
 public:
  explicit GaussianNb(double var_smoothing) : var_smoothing_(var_smoothing) {}
  std::string name() const override { return "gaussianNB"; }
  StepRole role() const override { return StepRole::Classifier; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  std::vector<int> predict(const Matrix& X) const override;
  Matrix predict_proba(const Matrix& X) const;  // rows sum to 1 over fitted classes
  const std::vector<int>& classes() const { return classes_; }
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

 private:
  Matrix joint_log_likelihood(const Matrix& X) const;
  double var_smoothing_;
  std::vector<int> classes_;
  std::vector<double> log_prior_;
  Matrix mean_, var_;  // class x feature
};

class BernoulliNb final : public StepModel {
 public:
  BernoulliNb(double alpha, bool fit_prior) : alpha_(alpha), fit_prior_(fit_prior) {}
  std::string name() const override { return "bernouilliNB"; }
  StepRole role() const override { return StepRole::Classifier; }
  void fit(const Matrix& X, const std::vector<int>& y) override;  // binarizes at 0
  std::vector<int> predict(const Matrix& X) const override;
  Matrix predict_proba(const Matrix& X) const;
  const std::vector<int>& classes() const { return classes_; }
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

 private:
  Matrix joint_log_likelihood(const Matrix& X) const;
  double alpha_;
  bool fit_prior_;
  std::vector<int> classes_;
  std::vector<double> log_prior_;
  Matrix log_theta_, log_one_minus_theta_;  // class x feature
};

struct TreeHParams {
  std::string criterion = "gini";  // gini | entropy
  long long max_depth = 30;
  std::string max_features = "all";  // sqrt | log2 | all
};

class DecisionTree final : public StepModel {
 public:
  DecisionTree(TreeHParams hp, std::uint64_t seed) : hp_(std::move(hp)), seed_(seed) {}
  std::string name() const override { return "decisionTree"; }
  StepRole role() const override { return StepRole::Classifier; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  std::vector<int> predict(const Matrix& X) const override;
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    int cls = -1;
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  // Fits on a row subset; used directly by the forest for bootstrap samples.
  void fit_on(const Matrix& X, const std::vector<int>& y, const std::vector<int>& rows);

 private:
  int build(const Matrix& X, const std::vector<int>& y, std::vector<int>& rows,
            int depth, int parent_majority, int n_classes, RandomStream& rng);
  TreeHParams hp_;
  std::uint64_t seed_;
  std::vector<Node> nodes_;
};

class RandomForest final : public StepModel {
 public:
  RandomForest(long long n_estimators, TreeHParams hp, std::uint64_t seed)
      : n_estimators_(n_estimators), hp_(std::move(hp)), seed_(seed) {}
  std::string name() const override { return "randomForest"; }
  StepRole role() const override { return StepRole::Classifier; }
  void fit(const Matrix& X, const std::vector<int>& y) override;
  std::vector<int> predict(const Matrix& X) const override;
  nlohmann::json save_state() const override;
  void load_state(const nlohmann::json& state) override;

  bool bootstrap = true;  // disabled only by tests comparing against a single tree

 private:
  long long n_estimators_;
  TreeHParams hp_;
  std::uint64_t seed_;
  std::vector<DecisionTree> trees_;
  int n_classes_ = 0;
};

}  // namespace evoflow
