#include <algorithm>
#include <string>

#include "kktp/dg_precond.hpp"
#include "kktp/error.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

BiluPreconditioner bilu0_factor(const BlockCsrMatrix& a, const MdfOrdering& ord) {
  if (a.n_block_rows() != a.n_block_cols())
    throw_error(ErrorCode::DimensionMismatch, "BILU0 needs a square block structure");
  const std::size_t n = a.n_block_rows();
  BiluPreconditioner f;
  f.perm_ = ord.order;
  f.lu_ = a.permuted(f.perm_);
  BlockCsrMatrix& b = f.lu_;
  const auto& p = b.pattern();

  f.orig_off_ = block_offsets(a.pattern().row_block_sizes);
  f.diag_pos_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pos = b.find(i, i);
    if (!pos) {
      throw_error(ErrorCode::MissingDiagonalBlock, "block row " + std::to_string(f.perm_[i]) + " has no diagonal block",
                  f.perm_[i]);
    }
    f.diag_pos_[i] = *pos;
  }

  f.diag_lu_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // IKJ: eliminate the strictly lower blocks of row i in increasing column order.
    for (std::size_t pik = p.row_ptr[i]; pik < p.row_ptr[i + 1] && p.col_idx[pik] < i; ++pik) {
      const std::size_t k = p.col_idx[pik];
      const DenseMatrix lik = f.diag_lu_[k].right_divide(b.block(pik).to_dense());
      b.set_block(pik, lik);
      std::size_t pij = pik + 1;
      for (std::size_t pkj = f.diag_pos_[k] + 1; pkj < p.row_ptr[k + 1]; ++pkj) {
        const std::size_t j = p.col_idx[pkj];
        while (pij < p.row_ptr[i + 1] && p.col_idx[pij] < j) ++pij;
        if (pij == p.row_ptr[i + 1] || p.col_idx[pij] != j) continue;  // fill outside the pattern is dropped
        const DenseMatrix upd = lik * b.block(pkj).to_dense();
        simd::axpy(-1.0, upd.values(), b.block(pij).values());
      }
    }
    try {
      f.diag_lu_.push_back(dense_lu_factor(b.block(f.diag_pos_[i]).to_dense()));
    } catch (const Error& e) {
      throw_error(ErrorCode::SingularPivotBlock, "elimination step " + std::to_string(i) + ": " + e.what(), i);
    }
  }
  return f;
}

void BiluPreconditioner::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "BILU input");
  require_same_size(out.size(), dimension(), "BILU output");
  const std::size_t n = lu_.n_block_rows();
  const auto& p = lu_.pattern();
  const auto& orig_off = orig_off_;
  // z = P v, block by block (block i of z is block perm[i] of v).
  std::vector<double> z(dimension());
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(orig_off[perm_[i]]), lu_.row_size(i),
                z.begin() + static_cast<std::ptrdiff_t>(lu_.row_offset(i)));

  // Forward: unit lower, block matvecs only.
  for (std::size_t i = 0; i < n; ++i) {
    double* zi = z.data() + lu_.row_offset(i);
    for (std::size_t k = p.row_ptr[i]; k < diag_pos_[i]; ++k) {
      const ConstBlockView l = lu_.block(k);
      std::vector<double> t(l.rows, 0.0);
      simd::gemv(l.rows, l.cols, l.data, z.data() + lu_.col_offset(p.col_idx[k]), t.data());
      for (std::size_t r = 0; r < l.rows; ++r) zi[r] -= t[r];
    }
  }
  // Backward: dense solves with the diagonal U blocks.
  for (std::size_t ii = n; ii-- > 0;) {
    double* zi = z.data() + lu_.row_offset(ii);
    for (std::size_t k = diag_pos_[ii] + 1; k < p.row_ptr[ii + 1]; ++k) {
      const ConstBlockView u = lu_.block(k);
      std::vector<double> t(u.rows, 0.0);
      simd::gemv(u.rows, u.cols, u.data, z.data() + lu_.col_offset(p.col_idx[k]), t.data());
      for (std::size_t r = 0; r < u.rows; ++r) zi[r] -= t[r];
    }
    diag_lu_[ii].solve_in_place({zi, lu_.row_size(ii)});
  }
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(lu_.row_offset(i)), lu_.row_size(i),
                out.begin() + static_cast<std::ptrdiff_t>(orig_off[perm_[i]]));
}

void BiluPreconditioner::apply_transpose_inverse(std::span<const double> v, std::span<double> out) const {
  // M = P^T L U P, so M^T x = v is solved with U^T (forward) then L^T (backward),
  // both in scatter form over the row-stored factors.
  require_same_size(v.size(), dimension(), "BILU input");
  require_same_size(out.size(), dimension(), "BILU output");
  const std::size_t n = lu_.n_block_rows();
  const auto& p = lu_.pattern();
  const auto& orig_off = orig_off_;
  std::vector<double> z(dimension());
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(orig_off[perm_[i]]), lu_.row_size(i),
                z.begin() + static_cast<std::ptrdiff_t>(lu_.row_offset(i)));

  for (std::size_t i = 0; i < n; ++i) {
    double* zi = z.data() + lu_.row_offset(i);
    diag_lu_[i].solve_transpose_in_place({zi, lu_.row_size(i)});
    for (std::size_t k = diag_pos_[i] + 1; k < p.row_ptr[i + 1]; ++k) {
      const ConstBlockView u = lu_.block(k);
      std::vector<double> t(u.cols, 0.0);
      simd::gemv_t(u.rows, u.cols, u.data, zi, t.data());
      double* zj = z.data() + lu_.col_offset(p.col_idx[k]);
      for (std::size_t c = 0; c < u.cols; ++c) zj[c] -= t[c];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    const double* zi = z.data() + lu_.row_offset(ii);
    for (std::size_t k = p.row_ptr[ii]; k < diag_pos_[ii]; ++k) {
      const ConstBlockView l = lu_.block(k);
      std::vector<double> t(l.cols, 0.0);
      simd::gemv_t(l.rows, l.cols, l.data, zi, t.data());
      double* zk = z.data() + lu_.col_offset(p.col_idx[k]);
      for (std::size_t c = 0; c < l.cols; ++c) zk[c] -= t[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(lu_.row_offset(i)), lu_.row_size(i),
                out.begin() + static_cast<std::ptrdiff_t>(orig_off[perm_[i]]));
}

DenseMatrix BiluPreconditioner::dense_lower() const {
  DenseMatrix l = DenseMatrix::identity(dimension());
  for (std::size_t k = 0; k < lu_.nnz_blocks(); ++k) {
    const std::size_t I = lu_.block_row(k), J = lu_.block_col(k);
    if (J >= I) continue;
    const ConstBlockView b = lu_.block(k);
    for (std::size_t r = 0; r < b.rows; ++r)
      for (std::size_t c = 0; c < b.cols; ++c) l(lu_.row_offset(I) + r, lu_.col_offset(J) + c) = b(r, c);
  }
  return l;
}

DenseMatrix BiluPreconditioner::dense_upper() const {
  DenseMatrix u(dimension(), dimension());
  for (std::size_t k = 0; k < lu_.nnz_blocks(); ++k) {
    const std::size_t I = lu_.block_row(k), J = lu_.block_col(k);
    if (J < I) continue;
    const ConstBlockView b = lu_.block(k);
    for (std::size_t r = 0; r < b.rows; ++r)
      for (std::size_t c = 0; c < b.cols; ++c) u(lu_.row_offset(I) + r, lu_.col_offset(J) + c) = b(r, c);
  }
  return u;
}

}  // namespace kktp
