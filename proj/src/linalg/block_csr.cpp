#include "kktp/block_csr.hpp"

#include <algorithm>
#include <string>

#include "kktp/error.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

std::optional<std::size_t> BlockPattern::find(std::size_t I, std::size_t J) const {
  if (I >= n_block_rows()) return std::nullopt;
  const auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[I]);
  const auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[I + 1]);
  const auto it = std::lower_bound(first, last, J);
  if (it == last || *it != J) return std::nullopt;
  return static_cast<std::size_t>(it - col_idx.begin());
}

void BlockPattern::validate() const {
  if (row_ptr.size() != n_block_rows() + 1) throw_error(ErrorCode::InvalidArgument, "row_ptr length");
  if (row_ptr.front() != 0 || row_ptr.back() != col_idx.size())
    throw_error(ErrorCode::InvalidArgument, "row_ptr endpoints");
  for (std::size_t I = 0; I < n_block_rows(); ++I) {
    if (row_ptr[I] > row_ptr[I + 1]) throw_error(ErrorCode::InvalidArgument, "row_ptr not monotone", I);
    for (std::size_t k = row_ptr[I]; k < row_ptr[I + 1]; ++k) {
      if (col_idx[k] >= n_block_cols()) throw_error(ErrorCode::IndexOutOfRange, "block column index", k);
      if (k > row_ptr[I] && col_idx[k] <= col_idx[k - 1])
        throw_error(ErrorCode::InvalidArgument, "block columns not strictly increasing in row " + std::to_string(I), I);
    }
  }
}

BlockPattern BlockPattern::from_rows(std::vector<std::size_t> row_sizes, std::vector<std::size_t> col_sizes,
                                     std::vector<std::vector<std::size_t>> cols_per_row) {
  require_same_size(cols_per_row.size(), row_sizes.size(), "BlockPattern::from_rows rows");
  BlockPattern p;
  p.row_block_sizes = std::move(row_sizes);
  p.col_block_sizes = std::move(col_sizes);
  p.row_ptr.assign(1, 0);
  for (auto& cols : cols_per_row) {
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    p.col_idx.insert(p.col_idx.end(), cols.begin(), cols.end());
    p.row_ptr.push_back(p.col_idx.size());
  }
  p.validate();
  return p;
}

std::vector<std::size_t> block_offsets(std::span<const std::size_t> sizes) {
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return off;
}

DenseMatrix BlockView::to_dense() const { return ConstBlockView{rows, cols, data}.to_dense(); }

DenseMatrix ConstBlockView::to_dense() const {
  return DenseMatrix(rows, cols, std::vector<double>(data, data + rows * cols));
}

BlockCsrMatrix::BlockCsrMatrix(BlockPattern pattern) : pattern_(std::move(pattern)) {
  pattern_.validate();
  row_off_ = block_offsets(pattern_.row_block_sizes);
  col_off_ = block_offsets(pattern_.col_block_sizes);
  blk_row_.resize(nnz_blocks());
  blk_start_.resize(nnz_blocks() + 1, 0);
  for (std::size_t I = 0; I < n_block_rows(); ++I) {
    for (std::size_t k = pattern_.row_ptr[I]; k < pattern_.row_ptr[I + 1]; ++k) {
      blk_row_[k] = I;
      blk_start_[k + 1] = blk_start_[k] + row_size(I) * col_size(pattern_.col_idx[k]);
    }
  }
  values_.assign(blk_start_.back(), 0.0);
}

BlockView BlockCsrMatrix::block(std::size_t k) noexcept {
  return {row_size(blk_row_[k]), col_size(pattern_.col_idx[k]), values_.data() + blk_start_[k]};
}

ConstBlockView BlockCsrMatrix::block(std::size_t k) const noexcept {
  return {row_size(blk_row_[k]), col_size(pattern_.col_idx[k]), values_.data() + blk_start_[k]};
}

void BlockCsrMatrix::set_block(std::size_t k, const DenseMatrix& value) {
  BlockView b = block(k);
  if (value.rows() != b.rows || value.cols() != b.cols)
    throw_error(ErrorCode::DimensionMismatch, "set_block shape", k);
  std::copy(value.values().begin(), value.values().end(), b.data);
}

void BlockCsrMatrix::matvec(std::span<const double> x, std::span<double> y) const {
  require_same_size(x.size(), cols(), "block_matvec input");
  require_same_size(y.size(), rows(), "block_matvec output");
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t I = 0; I < n_block_rows(); ++I) {
    double* yi = y.data() + row_off_[I];
    for (std::size_t k = pattern_.row_ptr[I]; k < pattern_.row_ptr[I + 1]; ++k) {
      const ConstBlockView b = block(k);
      simd::gemv(b.rows, b.cols, b.data, x.data() + col_off_[pattern_.col_idx[k]], yi);
    }
  }
}

std::vector<double> BlockCsrMatrix::matvec(std::span<const double> x) const {
  std::vector<double> y(rows());
  matvec(x, y);
  return y;
}

void BlockCsrMatrix::transpose_matvec(std::span<const double> x, std::span<double> y) const {
  require_same_size(x.size(), rows(), "block_transpose_matvec input");
  require_same_size(y.size(), cols(), "block_transpose_matvec output");
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t I = 0; I < n_block_rows(); ++I) {
    const double* xi = x.data() + row_off_[I];
    for (std::size_t k = pattern_.row_ptr[I]; k < pattern_.row_ptr[I + 1]; ++k) {
      const ConstBlockView b = block(k);
      simd::gemv_t(b.rows, b.cols, b.data, xi, y.data() + col_off_[pattern_.col_idx[k]]);
    }
  }
}

std::vector<double> BlockCsrMatrix::transpose_matvec(std::span<const double> x) const {
  std::vector<double> y(cols());
  transpose_matvec(x, y);
  return y;
}

DenseMatrix BlockCsrMatrix::densify() const {
  DenseMatrix d(rows(), cols());
  for (std::size_t k = 0; k < nnz_blocks(); ++k) {
    const ConstBlockView b = block(k);
    const std::size_t r0 = row_off_[blk_row_[k]];
    const std::size_t c0 = col_off_[pattern_.col_idx[k]];
    for (std::size_t i = 0; i < b.rows; ++i)
      for (std::size_t j = 0; j < b.cols; ++j) d(r0 + i, c0 + j) = b(i, j);
  }
  return d;
}

double BlockCsrMatrix::frobenius_norm() const { return simd::norm2(values_); }

BlockCsrMatrix BlockCsrMatrix::permuted(std::span<const std::size_t> perm) const {
  if (n_block_rows() != n_block_cols()) throw_error(ErrorCode::DimensionMismatch, "permuted: block structure not square");
  require_same_size(perm.size(), n_block_rows(), "permutation length");
  const std::size_t n = perm.size();
  std::vector<std::size_t> inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || inv[perm[i]] != n) throw_error(ErrorCode::InvalidArgument, "not a permutation", i);
    inv[perm[i]] = i;
  }
  std::vector<std::size_t> rs(n), cs(n);
  std::vector<std::vector<std::size_t>> cols(n);
  for (std::size_t i = 0; i < n; ++i) {
    rs[i] = row_size(perm[i]);
    cs[i] = col_size(perm[i]);
    for (std::size_t k = pattern_.row_ptr[perm[i]]; k < pattern_.row_ptr[perm[i] + 1]; ++k)
      cols[i].push_back(inv[pattern_.col_idx[k]]);
  }
  BlockCsrMatrix out(BlockPattern::from_rows(std::move(rs), std::move(cs), std::move(cols)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = pattern_.row_ptr[perm[i]]; k < pattern_.row_ptr[perm[i] + 1]; ++k) {
      const std::size_t kk = *out.find(i, inv[pattern_.col_idx[k]]);
      const ConstBlockView src = block(k);
      std::copy(src.data, src.data + src.rows * src.cols, out.block(kk).data);
    }
  }
  return out;
}

BlockCsrBuilder::BlockCsrBuilder(std::vector<std::size_t> row_block_sizes, std::vector<std::size_t> col_block_sizes)
    : rows_(std::move(row_block_sizes)), cols_(std::move(col_block_sizes)) {}

void BlockCsrBuilder::reserve_block(std::size_t I, std::size_t J) {
  if (I >= rows_.size() || J >= cols_.size()) throw_error(ErrorCode::IndexOutOfRange, "BlockCsrBuilder block index");
  blocks_.try_emplace({I, J}, rows_[I], cols_[J]);
}

void BlockCsrBuilder::add(std::size_t I, std::size_t J, const DenseMatrix& block) {
  reserve_block(I, J);
  DenseMatrix& dst = blocks_.at({I, J});
  if (block.rows() != dst.rows() || block.cols() != dst.cols())
    throw_error(ErrorCode::DimensionMismatch, "BlockCsrBuilder::add block shape");
  dst += block;
}

BlockCsrMatrix BlockCsrBuilder::build() const {
  std::vector<std::vector<std::size_t>> cols(rows_.size());
  for (const auto& [key, _] : blocks_) cols[key.first].push_back(key.second);
  BlockCsrMatrix m(BlockPattern::from_rows(rows_, cols_, std::move(cols)));
  for (const auto& [key, value] : blocks_) m.set_block(*m.find(key.first, key.second), value);
  return m;
}

}  // namespace kktp
