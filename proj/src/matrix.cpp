#include "contagion/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "contagion/error.hpp"

namespace contagion {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::PaymentOutOfLattice: return "PaymentOutOfLattice";
    case ErrorCode::PriceNegative: return "PriceNegative";
    case ErrorCode::NegativeLiquidation: return "NegativeLiquidation";
    case ErrorCode::StateOutOfLattice: return "StateOutOfLattice";
    case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::NestednessViolated: return "NestednessViolated";
    case ErrorCode::NoJumpFound: return "NoJumpFound";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix out;
  out.rows_ = rows.size();
  out.cols_ = rows.empty() ? 0 : rows.front().size();
  out.data_.reserve(out.rows_ * out.cols_);
  for (const auto& r : rows) {
    if (r.size() != out.cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    }
    out.data_.insert(out.data_.end(), r.begin(), r.end());
  }
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto src = row(r);
    out[r].assign(src.begin(), src.end());
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

Vector multiply(const Matrix& m, std::span<const double> x) {
  assert(m.cols() == x.size());
  Vector y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) y[r] = dot(m.row(r), x);
  return y;
}

Vector multiply_transposed(const Matrix& m, std::span<const double> x) {
  assert(m.rows() == x.size());
  Vector y(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) y[c] += row[c] * xr;
  }
  return y;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Vector positive_part(std::span<const double> v) {
  Vector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::max(x, 0.0); });
  return out;
}

}  // namespace contagion
