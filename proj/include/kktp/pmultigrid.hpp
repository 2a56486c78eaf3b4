#pragma once

// Two-level p-multigrid for the KKT system: the coarse level carries
// element-constant u and lambda (p = 0) and straight-sided elements (q = 1).

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "kktp/dense.hpp"
#include "kktp/kkt.hpp"
#include "kktp/krylov.hpp"
#include "kktp/point_csr.hpp"

namespace kktp {

struct TransferOps {
  Layout1d fine;
  PointCsrMatrix pu;     // fine u <- element constants
  PointCsrMatrix py;     // fine mesh coefficients <- q = 1 mesh coefficients
  PointCsrMatrix qy;     // selects the element endpoint coefficients
  PointCsrMatrix py_free;  // same maps restricted to the unpinned coordinates y
  PointCsrMatrix qy_free;
  PointCsrMatrix p;  // blkdiag(Pu, Py_free, Pu)
  PointCsrMatrix q;  // blkdiag(Pu^T, Qy_free, Pu^T)

  std::size_t fine_dimension() const noexcept { return p.rows(); }
  std::size_t coarse_dimension() const noexcept { return p.cols(); }
};

/// Mesh coefficients are numbered left to right, q per element plus one;
/// the two domain endpoints are pinned and excluded from y.
TransferOps build_transfer(const Layout1d& layout);

struct CoarseSystem {
  DenseMatrix a0;
  LuFactor lu;
};

/// A0 = Q A P, formed column by column through the fine operator and
/// factorized once. Throws SingularCoarseMatrix or SizeCapExceeded.
CoarseSystem assemble_coarse(const LinearOperator& a, const TransferOps& t, std::size_t cap = kDefaultDenseCap);

/// s = P A0^{-1} Q b;  s += M^{-1} (b - A s).
void pmg_apply(const LinearOperator& a, const CoarseSystem& coarse, const TransferOps& t, const Preconditioner& smoother,
               std::span<const double> b, std::span<double> out);

class PmgPreconditioner final : public Preconditioner {
 public:
  /// The system must outlive the preconditioner.
  PmgPreconditioner(const KktSystem& sys, TransferOps transfer, std::unique_ptr<Preconditioner> smoother,
                    std::size_t cap = kDefaultDenseCap);
  std::size_t dimension() const override { return op_.dimension(); }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  using Preconditioner::apply_inverse;

  const TransferOps& transfer() const noexcept { return transfer_; }
  const CoarseSystem& coarse() const noexcept { return coarse_; }
  const Preconditioner& smoother() const noexcept { return *smoother_; }

 private:
  KktOperator op_;
  TransferOps transfer_;
  std::unique_ptr<Preconditioner> smoother_;
  CoarseSystem coarse_;
};

}  // namespace kktp
