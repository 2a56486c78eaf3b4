#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kktp/dense.hpp"

namespace kktp {

/// Block-CSR index structure with independent row and column block sizes.
struct BlockPattern {
  std::vector<std::size_t> row_block_sizes;
  std::vector<std::size_t> col_block_sizes;
  std::vector<std::size_t> row_ptr;  // length n_block_rows + 1
  std::vector<std::size_t> col_idx;  // strictly increasing within each block row

  std::size_t n_block_rows() const noexcept { return row_block_sizes.size(); }
  std::size_t n_block_cols() const noexcept { return col_block_sizes.size(); }
  std::size_t nnz_blocks() const noexcept { return col_idx.size(); }

  /// Position k of block (I, J) in col_idx, if stored.
  std::optional<std::size_t> find(std::size_t I, std::size_t J) const;

  /// Throws InvalidArgument or IndexOutOfRange when the arrays are inconsistent.
  void validate() const;

  /// Builds a pattern from per-row column lists (sorted and deduplicated here).
  static BlockPattern from_rows(std::vector<std::size_t> row_sizes, std::vector<std::size_t> col_sizes,
                                std::vector<std::vector<std::size_t>> cols_per_row);

  friend bool operator==(const BlockPattern&, const BlockPattern&) = default;
};

/// Prefix sums of block sizes: offsets[i] is the first scalar index of block i.
std::vector<std::size_t> block_offsets(std::span<const std::size_t> sizes);

struct BlockView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double* data = nullptr;
  double& operator()(std::size_t i, std::size_t j) const noexcept { return data[i * cols + j]; }
  std::span<double> values() const noexcept { return {data, rows * cols}; }
  DenseMatrix to_dense() const;
};

struct ConstBlockView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  const double* data = nullptr;
  double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * cols + j]; }
  std::span<const double> values() const noexcept { return {data, rows * cols}; }
  DenseMatrix to_dense() const;
};

class BlockCsrMatrix {
 public:
  BlockCsrMatrix() = default;
  /// All stored blocks start at zero.
  explicit BlockCsrMatrix(BlockPattern pattern);

  const BlockPattern& pattern() const noexcept { return pattern_; }
  std::size_t n_block_rows() const noexcept { return pattern_.n_block_rows(); }
  std::size_t n_block_cols() const noexcept { return pattern_.n_block_cols(); }
  std::size_t nnz_blocks() const noexcept { return pattern_.nnz_blocks(); }
  std::size_t rows() const noexcept { return row_off_.empty() ? 0 : row_off_.back(); }
  std::size_t cols() const noexcept { return col_off_.empty() ? 0 : col_off_.back(); }
  std::size_t row_offset(std::size_t I) const noexcept { return row_off_[I]; }
  std::size_t col_offset(std::size_t J) const noexcept { return col_off_[J]; }
  std::size_t row_size(std::size_t I) const noexcept { return pattern_.row_block_sizes[I]; }
  std::size_t col_size(std::size_t J) const noexcept { return pattern_.col_block_sizes[J]; }

  /// Block row that owns stored block k.
  std::size_t block_row(std::size_t k) const noexcept { return blk_row_[k]; }
  std::size_t block_col(std::size_t k) const noexcept { return pattern_.col_idx[k]; }

  BlockView block(std::size_t k) noexcept;
  ConstBlockView block(std::size_t k) const noexcept;
  std::optional<std::size_t> find(std::size_t I, std::size_t J) const { return pattern_.find(I, J); }
  void set_block(std::size_t k, const DenseMatrix& value);

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// y = A x
  void matvec(std::span<const double> x, std::span<double> y) const;
  std::vector<double> matvec(std::span<const double> x) const;
  /// y = A^T x, never forming A^T.
  void transpose_matvec(std::span<const double> x, std::span<double> y) const;
  std::vector<double> transpose_matvec(std::span<const double> x) const;

  DenseMatrix densify() const;
  double frobenius_norm() const;

  /// Symmetric block permutation: block row/col i of the result is block
  /// row/col perm[i] of this matrix. Requires a square block structure.
  BlockCsrMatrix permuted(std::span<const std::size_t> perm) const;

 private:
  BlockPattern pattern_;
  std::vector<std::size_t> row_off_;
  std::vector<std::size_t> col_off_;
  std::vector<std::size_t> blk_row_;
  std::vector<std::size_t> blk_start_;  // offset of block k in values_
  std::vector<double> values_;
};

/// Accumulating builder; repeated add() calls on the same block sum.
class BlockCsrBuilder {
 public:
  BlockCsrBuilder(std::vector<std::size_t> row_block_sizes, std::vector<std::size_t> col_block_sizes);
  void add(std::size_t I, std::size_t J, const DenseMatrix& block);
  /// Ensures block (I, J) is stored even if it stays zero.
  void reserve_block(std::size_t I, std::size_t J);
  BlockCsrMatrix build() const;

 private:
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  std::map<std::pair<std::size_t, std::size_t>, DenseMatrix> blocks_;
};

}  // namespace kktp
