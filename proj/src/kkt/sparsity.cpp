#include <algorithm>
#include <set>

#include "kktp/kkt.hpp"

namespace kktp {

BlockPattern symbolic_gram_pattern(const BlockPattern& a) {
  // Column J of A^T A couples every pair of block columns sharing a block row.
  std::vector<std::set<std::size_t>> rows(a.n_block_cols());
  for (std::size_t I = 0; I < a.n_block_rows(); ++I)
    for (std::size_t p = a.row_ptr[I]; p < a.row_ptr[I + 1]; ++p)
      for (std::size_t q = a.row_ptr[I]; q < a.row_ptr[I + 1]; ++q) rows[a.col_idx[p]].insert(a.col_idx[q]);
  std::vector<std::vector<std::size_t>> cols(rows.size());
  for (std::size_t J = 0; J < rows.size(); ++J) cols[J].assign(rows[J].begin(), rows[J].end());
  return BlockPattern::from_rows(a.col_block_sizes, a.col_block_sizes, std::move(cols));
}

SparsityRatio count_block_sparsity(const BlockCsrMatrix& ju, const BlockPattern& buu_pattern) {
  const auto& p = ju.pattern();
  const std::size_t n = p.n_block_rows();
  SparsityRatio out;
  if (n == 0) return out;
  std::size_t max_count = 0;
  for (std::size_t I = 0; I < n; ++I) max_count = std::max(max_count, p.row_ptr[I + 1] - p.row_ptr[I]);

  std::size_t sum1 = 0, sum2 = 0;
  for (std::size_t I = 0; I < n; ++I) {
    if (p.row_ptr[I + 1] - p.row_ptr[I] != max_count) continue;
    bool interior = true;
    for (std::size_t k = p.row_ptr[I]; k < p.row_ptr[I + 1] && interior; ++k) {
      const std::size_t J = p.col_idx[k];
      if (J < n && p.row_ptr[J + 1] - p.row_ptr[J] != max_count) interior = false;
    }
    if (!interior) continue;
    ++out.interior_rows;
    sum1 += max_count;
    sum2 += buu_pattern.row_ptr[I + 1] - buu_pattern.row_ptr[I];
  }
  if (out.interior_rows == 0) return out;
  out.m1 = static_cast<double>(sum1) / static_cast<double>(out.interior_rows);
  out.m2 = static_cast<double>(sum2) / static_cast<double>(out.interior_rows);
  out.ratio = out.m2 / out.m1;
  return out;
}

}  // namespace kktp
