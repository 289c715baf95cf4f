#include <algorithm>
#include <cmath>

#include "evoflow/mlkit_models.hpp"

namespace evoflow {

namespace {

constexpr double kJacobiTol = 1e-10;
constexpr int kJacobiMaxSweeps = 100;

// Cyclic Jacobi eigendecomposition of a symmetric matrix. A is destroyed;
// eigenvectors come back as columns of V.
void jacobi_eigen(Matrix& A, Matrix& V) {
  std::size_t n = A.rows;
  V = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) V.at(i, i) = 1.0;

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += A.at(p, q) * A.at(p, q);
    if (std::sqrt(off) < kJacobiTol) return;

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = A.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (A.at(q, q) - A.at(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = V.at(k, p), vkq = V.at(k, q);
          V.at(k, p) = c * vkp - s * vkq;
          V.at(k, q) = s * vkp + c * vkq;
        }
      }
  }
}

}  // namespace

void Pca::fit(const Matrix& X, const std::vector<int>&) {
  if (X.rows < 2 || X.cols == 0) throw StepFailure("pca: needs at least 2 samples");
  std::size_t d = X.cols;
  mean_.assign(d, 0.0);
  for (std::size_t r = 0; r < X.rows; ++r)
    for (std::size_t c = 0; c < d; ++c) mean_[c] += X.at(r, c);
  for (auto& m : mean_) m /= static_cast<double>(X.rows);

  Matrix cov(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < X.rows; ++r)
        s += (X.at(r, i) - mean_[i]) * (X.at(r, j) - mean_[j]);
      s /= static_cast<double>(X.rows - 1);
      cov.at(i, j) = s;
      cov.at(j, i) = s;
    }

  Matrix V;
  jacobi_eigen(cov, V);

  std::vector<int> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (cov.at(a, a) != cov.at(b, b)) return cov.at(a, a) > cov.at(b, b);
    return a < b;
  });

  auto k = static_cast<std::size_t>(std::clamp<long long>(
      requested_, 1, static_cast<long long>(std::min(d, X.rows - 1))));
  components_ = Matrix(k, d);
  eigenvalues_.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    int col = order[i];
    eigenvalues_[i] = cov.at(col, col);
    // Deterministic sign: the largest-magnitude coordinate is positive.
    std::size_t arg = 0;
    for (std::size_t r = 1; r < d; ++r)
      if (std::abs(V.at(r, col)) > std::abs(V.at(arg, col))) arg = r;
    double sign = V.at(arg, col) < 0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < d; ++r) components_.at(i, r) = sign * V.at(r, col);
  }
  if (whiten_)
    for (double ev : eigenvalues_)
      if (ev < 1e-12)
        throw StepFailure("pca: cannot whiten a near-zero-variance component");
}

Matrix Pca::transform(const Matrix& X) const {
  if (X.cols != mean_.size()) throw StepFailure("pca: feature count changed");
  std::size_t k = components_.rows;
  Matrix out(X.rows, k);
  for (std::size_t r = 0; r < X.rows; ++r)
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < X.cols; ++c)
        s += (X.at(r, c) - mean_[c]) * components_.at(j, c);
      out.at(r, j) = whiten_ ? s / std::sqrt(eigenvalues_[j]) : s;
    }
  return out;
}

nlohmann::json Pca::save_state() const {
  return {{"mean", mean_},
          {"components", matrix_to_json(components_)},
          {"eigenvalues", eigenvalues_}};
}

void Pca::load_state(const nlohmann::json& state) {
  mean_ = state.at("mean").get<std::vector<double>>();
  components_ = matrix_from_json(state.at("components"));
  eigenvalues_ = state.at("eigenvalues").get<std::vector<double>>();
}

}  // namespace evoflow
