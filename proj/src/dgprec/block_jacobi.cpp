#include "kktp/dg_precond.hpp"
#include "kktp/error.hpp"

namespace kktp {

std::vector<double> TransposablePreconditioner::apply_transpose_inverse(std::span<const double> v) const {
  std::vector<double> out(dimension());
  apply_transpose_inverse(v, out);
  return out;
}

BlockJacobiPreconditioner build_block_jacobi(const BlockCsrMatrix& a) {
  if (a.n_block_rows() != a.n_block_cols())
    throw_error(ErrorCode::DimensionMismatch, "block Jacobi needs a square block structure");
  BlockJacobiPreconditioner p;
  p.offsets_ = block_offsets(a.pattern().row_block_sizes);
  p.factors_.reserve(a.n_block_rows());
  for (std::size_t I = 0; I < a.n_block_rows(); ++I) {
    const auto k = a.find(I, I);
    if (!k) throw_error(ErrorCode::MissingDiagonalBlock, "block row " + std::to_string(I) + " has no diagonal block", I);
    try {
      p.factors_.push_back(dense_lu_factor(a.block(*k).to_dense()));
    } catch (const Error& e) {
      throw_error(e.code(), "diagonal block " + std::to_string(I) + ": " + e.what(), I);
    }
  }
  return p;
}

void BlockJacobiPreconditioner::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "block Jacobi input");
  require_same_size(out.size(), dimension(), "block Jacobi output");
  std::copy(v.begin(), v.end(), out.begin());
  for (std::size_t i = 0; i < factors_.size(); ++i)
    factors_[i].solve_in_place(out.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]));
}

void BlockJacobiPreconditioner::apply_transpose_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "block Jacobi input");
  require_same_size(out.size(), dimension(), "block Jacobi output");
  std::copy(v.begin(), v.end(), out.begin());
  for (std::size_t i = 0; i < factors_.size(); ++i)
    factors_[i].solve_transpose_in_place(out.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]));
}

}  // namespace kktp
