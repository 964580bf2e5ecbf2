#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srgnav {

/// Dense row-major matrix of doubles.
///
/// Kernels are plain loops on purpose: training must be bit-reproducible
/// for a fixed seed, and the model sizes here never justify a BLAS.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

  static Matrix identity(std::size_t n);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a * b. Throws DimensionError on shape mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// transpose(a) * b.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

/// a * transpose(b).
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

bool all_finite(const Matrix& a);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace srgnav
