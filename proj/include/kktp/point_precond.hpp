#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kktp/dense.hpp"
#include "kktp/krylov.hpp"
#include "kktp/point_csr.hpp"

namespace kktp {

/// Reciprocal diagonal. Diagonal entries with |d| < 1e-300 are replaced by 1
/// and reported through safeguarded().
class PointJacobi final : public Preconditioner {
 public:
  std::size_t dimension() const override { return inv_diag_.size(); }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  using Preconditioner::apply_inverse;

  bool safeguarded() const noexcept { return safeguarded_count_ > 0; }
  std::size_t safeguarded_count() const noexcept { return safeguarded_count_; }
  std::span<const double> inverse_diagonal() const noexcept { return inv_diag_; }

 private:
  friend PointJacobi point_jacobi(const PointCsrMatrix& b);
  std::vector<double> inv_diag_;
  std::size_t safeguarded_count_ = 0;
};

PointJacobi point_jacobi(const PointCsrMatrix& b);

/// Zero-fill scalar ILU in natural ordering, stored in place (unit lower L).
class PointIlu0 final : public Preconditioner {
 public:
  std::size_t dimension() const override { return lu_.rows(); }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  using Preconditioner::apply_inverse;

  const PointCsrMatrix& factors() const noexcept { return lu_; }
  DenseMatrix dense_lower() const;
  DenseMatrix dense_upper() const;

 private:
  friend PointIlu0 point_ilu0_factor(const PointCsrMatrix& b);
  PointCsrMatrix lu_;
  std::vector<std::size_t> diag_pos_;
};

/// Throws ZeroPivot(row) on a missing, zero or non-finite pivot.
PointIlu0 point_ilu0_factor(const PointCsrMatrix& b);

}  // namespace kktp
