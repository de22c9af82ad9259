#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace contagion {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sizes here are small (tens of banks), so no
/// expression templates or BLAS.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
/// y = M x
Vector multiply(const Matrix& m, std::span<const double> x);
/// y = Mᵀ x
Vector multiply_transposed(const Matrix& m, std::span<const double> x);

double sup_distance(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> v);
Vector positive_part(std::span<const double> v);

}  // namespace contagion
