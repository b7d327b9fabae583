#pragma once

#include <cstddef>
#include <vector>

#include "intentnet/errors.hpp"

namespace intentnet {

// Dense row-major matrix of doubles. Deliberately plain: the numeric kernels
// operate on raw pointers, this type just owns storage and checks shapes.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }

  void require_shape(std::size_t r, std::size_t c, const char* what) const {
    if (rows != r || cols != c) {
      throw Error(Errc::ShapeMismatch, what);
    }
  }
};

}  // namespace intentnet
