#pragma once

// Approximations of a square block-sparse Jacobian: block Jacobi and
// zero-fill block ILU preceded by a minimum-discarded-fill row ordering.

#include <cstddef>
#include <span>
#include <vector>

#include "kktp/block_csr.hpp"
#include "kktp/dense.hpp"
#include "kktp/krylov.hpp"

namespace kktp {

/// A preconditioner that can also solve with the transpose of its matrix.
class TransposablePreconditioner : public Preconditioner {
 public:
  virtual void apply_transpose_inverse(std::span<const double> v, std::span<double> out) const = 0;
  std::vector<double> apply_transpose_inverse(std::span<const double> v) const;
  using Preconditioner::apply_inverse;
};

class BlockJacobiPreconditioner final : public TransposablePreconditioner {
 public:
  std::size_t dimension() const override { return offsets_.empty() ? 0 : offsets_.back(); }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  void apply_transpose_inverse(std::span<const double> v, std::span<double> out) const override;
  using TransposablePreconditioner::apply_inverse;
  using TransposablePreconditioner::apply_transpose_inverse;

  std::size_t block_count() const noexcept { return factors_.size(); }
  const LuFactor& factor(std::size_t i) const { return factors_.at(i); }

 private:
  friend BlockJacobiPreconditioner build_block_jacobi(const BlockCsrMatrix& a);
  std::vector<std::size_t> offsets_;
  std::vector<LuFactor> factors_;
};

/// Throws MissingDiagonalBlock or SingularBlock; Error::index() names the block row.
BlockJacobiPreconditioner build_block_jacobi(const BlockCsrMatrix& a);

struct MdfOrdering {
  /// order[s] is the original block row eliminated at step s.
  std::vector<std::size_t> order;
  std::vector<double> weights_at_selection;
};

MdfOrdering natural_ordering(std::size_t n);

/// Discard weight of block row k with respect to the rows still marked
/// uneliminated (eliminated[i] != 0 excludes row i). Uses the static pattern
/// and the original diagonal block of k.
double mdf_weight(const BlockCsrMatrix& a, std::size_t k, std::span<const char> eliminated);

/// Greedy minimum discarded fill ordering; ties go to the lowest original index.
MdfOrdering mdf_order(const BlockCsrMatrix& a);

class BiluPreconditioner final : public TransposablePreconditioner {
 public:
  std::size_t dimension() const override { return lu_.rows(); }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  void apply_transpose_inverse(std::span<const double> v, std::span<double> out) const override;
  using TransposablePreconditioner::apply_inverse;
  using TransposablePreconditioner::apply_transpose_inverse;

  /// In-place factors of the permuted matrix: strict lower blocks hold L
  /// (unit block diagonal implied), the rest holds U.
  const BlockCsrMatrix& factors() const noexcept { return lu_; }
  std::span<const std::size_t> permutation() const noexcept { return perm_; }
  DenseMatrix dense_lower() const;
  DenseMatrix dense_upper() const;

 private:
  friend BiluPreconditioner bilu0_factor(const BlockCsrMatrix& a, const MdfOrdering& ord);
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> orig_off_;  // block offsets in the original ordering
  BlockCsrMatrix lu_;
  std::vector<std::size_t> diag_pos_;
  std::vector<LuFactor> diag_lu_;
};

/// Block ILU(0) of the symmetrically permuted matrix. Updates that would
/// create a block outside the pattern are skipped. Throws MissingDiagonalBlock
/// or SingularPivotBlock (index = elimination step).
BiluPreconditioner bilu0_factor(const BlockCsrMatrix& a, const MdfOrdering& ord);

}  // namespace kktp
