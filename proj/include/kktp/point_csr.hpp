#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kktp/block_csr.hpp"
#include "kktp/dense.hpp"

namespace kktp {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Scalar CSR matrix with sorted, duplicate-free columns in each row.
class PointCsrMatrix {
 public:
  PointCsrMatrix() = default;
  /// Empty (all-zero) matrix.
  PointCsrMatrix(std::size_t n_rows, std::size_t n_cols);
  /// Validates sortedness, uniqueness and ranges of the raw arrays.
  PointCsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_ptr,
                 std::vector<std::size_t> col_idx, std::vector<double> values);

  static PointCsrMatrix identity(std::size_t n);
  /// Keeps every entry whose magnitude exceeds drop_tol (all nonzeros by default).
  static PointCsrMatrix from_dense(const DenseMatrix& d, double drop_tol = 0.0);

  std::size_t rows() const noexcept { return n_rows_; }
  std::size_t cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  std::optional<std::size_t> find(std::size_t i, std::size_t j) const;
  /// Stored value or 0.
  double at(std::size_t i, std::size_t j) const;

  void matvec(std::span<const double> x, std::span<double> y) const;
  std::vector<double> matvec(std::span<const double> x) const;
  /// y += alpha * A x
  void matvec_add(double alpha, std::span<const double> x, std::span<double> y) const;
  void transpose_matvec(std::span<const double> x, std::span<double> y) const;
  std::vector<double> transpose_matvec(std::span<const double> x) const;

  PointCsrMatrix transposed() const;
  DenseMatrix densify() const;
  std::vector<double> diagonal() const;
  double frobenius_norm() const;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Sums duplicates, sorts each row. Throws IndexOutOfRange.
PointCsrMatrix assemble_point_csr(std::size_t n_rows, std::size_t n_cols, std::span<const Triplet> triplets);

/// Sparse product A B.
PointCsrMatrix multiply(const PointCsrMatrix& a, const PointCsrMatrix& b);
/// alpha A + beta B on the union pattern.
PointCsrMatrix add(double alpha, const PointCsrMatrix& a, double beta, const PointCsrMatrix& b);
/// A^T diag(w) A, or A^T A when w is empty. Symmetric by construction.
PointCsrMatrix gram(const PointCsrMatrix& a, std::span<const double> w = {});
/// A^T B A (B square, symmetric result mirrored exactly).
PointCsrMatrix congruence(const PointCsrMatrix& a, const PointCsrMatrix& b);

/// Point view of a block matrix; every stored block entry is kept, including zeros.
PointCsrMatrix block_to_point(const BlockCsrMatrix& a);
/// Inverse of block_to_point: blocks are created wherever a stored entry lands.
BlockCsrMatrix point_to_block(const PointCsrMatrix& a, std::vector<std::size_t> row_block_sizes,
                              std::vector<std::size_t> col_block_sizes);

}  // namespace kktp
