#pragma once

#include <cstddef>
#include <vector>

namespace evoflow {

// Dense row-major matrix of doubles; just enough linear algebra plumbing for
// the workflow steps.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  const double* row_ptr(std::size_t r) const { return values.data() + r * cols; }
  double* row_ptr(std::size_t r) { return values.data() + r * cols; }

  Matrix select_rows(const std::vector<int>& idx) const {
    Matrix out(idx.size(), cols);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t c = 0; c < cols; ++c)
        out.at(i, c) = at(static_cast<std::size_t>(idx[i]), c);
    return out;
  }

  Matrix select_cols(const std::vector<int>& idx) const {
    Matrix out(rows, idx.size());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < idx.size(); ++j)
        out.at(r, j) = at(r, static_cast<std::size_t>(idx[j]));
    return out;
  }

  bool operator==(const Matrix&) const = default;
};

}  // namespace evoflow
