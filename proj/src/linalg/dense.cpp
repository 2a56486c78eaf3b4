#include "kktp/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "kktp/error.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require_same_size(data_.size(), rows * cols, "DenseMatrix entries");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    require_same_size(row.size(), c, "DenseMatrix::from_rows row");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> v) {
  require_same_size(v.size(), rows_, "DenseMatrix::set_column");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  require_same_size(x.size(), cols_, "DenseMatrix::multiply input");
  require_same_size(y.size(), rows_, "DenseMatrix::multiply output");
  std::fill(y.begin(), y.end(), 0.0);
  simd::gemv(rows_, cols_, data_.data(), x.data(), y.data());
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

void DenseMatrix::multiply_add(std::span<const double> x, std::span<double> y) const {
  require_same_size(x.size(), cols_, "DenseMatrix::multiply_add input");
  require_same_size(y.size(), rows_, "DenseMatrix::multiply_add output");
  simd::gemv(rows_, cols_, data_.data(), x.data(), y.data());
}

void DenseMatrix::transpose_multiply_add(std::span<const double> x, std::span<double> y) const {
  require_same_size(x.size(), rows_, "DenseMatrix::transpose_multiply_add input");
  require_same_size(y.size(), cols_, "DenseMatrix::transpose_multiply_add output");
  simd::gemv_t(rows_, cols_, data_.data(), x.data(), y.data());
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const { return simd::norm2(data_); }

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw_error(ErrorCode::DimensionMismatch, "DenseMatrix +=");
  simd::axpy(1.0, other.data_, data_);
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw_error(ErrorCode::DimensionMismatch, "DenseMatrix -=");
  simd::axpy(-1.0, other.data_, data_);
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw_error(ErrorCode::DimensionMismatch, "DenseMatrix product");
  DenseMatrix c(a.rows(), b.cols());
  // Row i of C accumulates a(i,k) * row k of B.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) simd::axpy(aik, b.row(k), ci);
    }
  }
  return c;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

LuFactor dense_lu_factor(const DenseMatrix& block) {
  if (!block.square()) {
    throw_error(ErrorCode::DimensionMismatch, "dense_lu_factor: block is " + std::to_string(block.rows()) + "x" +
                                                  std::to_string(block.cols()) + ", expected square");
  }
  const std::size_t n = block.rows();
  LuFactor f;
  f.lu_ = block;
  f.piv_.resize(n);
  DenseMatrix& a = f.lu_;
  const double threshold = kSingularPivotTolerance * block.max_abs();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::fabs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > threshold) || best == 0.0) {
      throw_error(ErrorCode::SingularBlock, "pivot " + std::to_string(k) + " below relative threshold");
    }
    f.piv_[k] = p;
    if (p != k) std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(p).begin());
    const double inv = 1.0 / a(k, k);
    auto rowk = a.row(k).subspan(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) * inv;
      a(i, k) = l;
      if (l != 0.0) simd::axpy(-l, rowk, a.row(i).subspan(k + 1));
    }
  }
  return f;
}

void LuFactor::solve_in_place(std::span<double> b) const {
  const std::size_t n = size();
  require_same_size(b.size(), n, "LuFactor::solve");
  for (std::size_t k = 0; k < n; ++k)
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
  for (std::size_t i = 1; i < n; ++i) b[i] -= simd::dot(lu_.row(i).first(i), b.first(i));
  for (std::size_t ii = n; ii-- > 0;) {
    const auto row = lu_.row(ii);
    b[ii] = (b[ii] - simd::dot(row.subspan(ii + 1), b.subspan(ii + 1))) / row[ii];
  }
}

void LuFactor::solve_transpose_in_place(std::span<double> b) const {
  // A^T = U^T L^T P: forward with U^T, backward with unit L^T, then undo swaps.
  const std::size_t n = size();
  require_same_size(b.size(), n, "LuFactor::solve_transpose");
  for (std::size_t k = 0; k < n; ++k) {
    b[k] /= lu_(k, k);
    if (b[k] != 0.0) simd::axpy(-b[k], lu_.row(k).subspan(k + 1), b.subspan(k + 1));
  }
  for (std::size_t kk = n; kk-- > 0;) {
    const auto row = lu_.row(kk);
    for (std::size_t j = 0; j < kk; ++j) b[j] -= row[j] * b[kk];
  }
  for (std::size_t k = n; k-- > 0;)
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
}

std::vector<double> LuFactor::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

std::vector<double> LuFactor::solve_transpose(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_transpose_in_place(x);
  return x;
}

DenseMatrix LuFactor::left_divide(const DenseMatrix& b) const {
  require_same_size(b.rows(), size(), "LuFactor::left_divide");
  DenseMatrix x(b.rows(), b.cols());
  std::vector<double> col;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    col = b.column(j);
    solve_in_place(col);
    x.set_column(j, col);
  }
  return x;
}

DenseMatrix LuFactor::right_divide(const DenseMatrix& b) const {
  // Row r of X solves X_r A = B_r, i.e. A^T X_r^T = B_r^T.
  require_same_size(b.cols(), size(), "LuFactor::right_divide");
  DenseMatrix x = b;
  for (std::size_t r = 0; r < x.rows(); ++r) solve_transpose_in_place(x.row(r));
  return x;
}

DenseMatrix LuFactor::inverse() const { return left_divide(DenseMatrix::identity(size())); }

std::vector<double> dense_solve(const DenseMatrix& a, std::span<const double> b) {
  return dense_lu_factor(a).solve(b);
}

}  // namespace kktp
