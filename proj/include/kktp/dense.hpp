#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kktp {

/// Row-major dense matrix. Used both for the small element blocks of the
/// block-sparse containers and for desk-scale reference (oracle) matrices.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  /// y += A x
  void multiply_add(std::span<const double> x, std::span<double> y) const;
  /// y += A^T x
  void transpose_multiply_add(std::span<const double> x, std::span<double> y) const;

  DenseMatrix transposed() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using DenseBlock = DenseMatrix;

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

/// In-place LU with partial pivoting, PA = LU (unit lower L).
class LuFactor {
 public:
  LuFactor() = default;

  std::size_t size() const noexcept { return lu_.rows(); }
  const DenseMatrix& lu() const noexcept { return lu_; }
  /// pivots()[k] is the row swapped with row k at elimination step k.
  std::span<const std::size_t> pivots() const noexcept { return piv_; }

  void solve_in_place(std::span<double> b) const;
  void solve_transpose_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;
  std::vector<double> solve_transpose(std::span<const double> b) const;

  /// A^{-1} B
  DenseMatrix left_divide(const DenseMatrix& b) const;
  /// B A^{-1}
  DenseMatrix right_divide(const DenseMatrix& b) const;
  DenseMatrix inverse() const;

 private:
  friend LuFactor dense_lu_factor(const DenseMatrix& block);
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
};

/// Relative pivot threshold: a pivot below this times the largest initial
/// |entry| marks the block singular.
inline constexpr double kSingularPivotTolerance = 1e-14;

/// Throws Error(SingularBlock) on a pivot below the relative threshold and
/// Error(DimensionMismatch) for a non-square input.
LuFactor dense_lu_factor(const DenseMatrix& block);

/// Convenience: solve A x = b by a fresh LU factorization.
std::vector<double> dense_solve(const DenseMatrix& a, std::span<const double> b);

}  // namespace kktp
