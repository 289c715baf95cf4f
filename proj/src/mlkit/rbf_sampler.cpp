#include <cmath>
#include <numbers>

#include "evoflow/mlkit_models.hpp"

namespace evoflow {

void RbfSampler::fit(const Matrix& X, const std::vector<int>&) {
  if (X.cols == 0) throw StepFailure("rbfSampler: empty input");
  auto n = static_cast<std::size_t>(n_components_);
  RandomStream rng(seed_);
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 * gamma_));
  omega_ = Matrix(X.cols, n);
  for (std::size_t r = 0; r < X.cols; ++r)
    for (std::size_t c = 0; c < n; ++c) omega_.at(r, c) = normal(rng);
  offset_.resize(n);
  for (std::size_t c = 0; c < n; ++c)
    offset_[c] = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
}

Matrix RbfSampler::transform(const Matrix& X) const {
  if (X.cols != omega_.rows) throw StepFailure("rbfSampler: feature count changed");
  std::size_t n = offset_.size();
  double scale = std::sqrt(2.0 / static_cast<double>(n));
  Matrix out(X.rows, n);
  for (std::size_t r = 0; r < X.rows; ++r)
    for (std::size_t j = 0; j < n; ++j) {
      double s = offset_[j];
      for (std::size_t c = 0; c < X.cols; ++c) s += X.at(r, c) * omega_.at(c, j);
      out.at(r, j) = scale * std::cos(s);
    }
  return out;
}

nlohmann::json RbfSampler::save_state() const {
  return {{"omega", matrix_to_json(omega_)}, {"offset", offset_}};
}

void RbfSampler::load_state(const nlohmann::json& state) {
  omega_ = matrix_from_json(state.at("omega"));
  offset_ = state.at("offset").get<std::vector<double>>();
}

}  // namespace evoflow
