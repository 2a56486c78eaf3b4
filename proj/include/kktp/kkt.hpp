#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kktp/block_csr.hpp"
#include "kktp/dense.hpp"
#include "kktp/krylov.hpp"
#include "kktp/point_csr.hpp"

namespace kktp {

/// Discretization metadata of a 1D shock-tracking system; needed by the
/// p-multigrid transfers and carried through export/import.
struct Layout1d {
  std::size_t n_elem = 0;
  std::size_t p = 0;
  std::size_t q = 1;
  friend bool operator==(const Layout1d&, const Layout1d&) = default;
};

/// Factor matrices of the SQP saddle-point system. Unknowns are ordered
/// (u, y, lambda). B_uu and B_uy are only ever applied through dRdu and dRdx.
struct KktFactors {
  BlockCsrMatrix ju;       // dr/du, N_u x N_u
  BlockCsrMatrix drdu;     // dR/du, N_u' x N_u
  BlockCsrMatrix drdx;     // dR/dx, N_u' x N_x (unit column blocks)
  PointCsrMatrix drmshdx;  // dRmsh/dx, n_elem x N_x
  PointCsrMatrix dphidy;   // dphi/dy, N_x x N_y
  PointCsrMatrix d;        // mesh regularization, N_x x N_x
  PointCsrMatrix jy;       // (dr/dx)(dphi/dy), N_u x N_y
  double kappa = 0.0;
  double gamma = 0.0;
  std::optional<Layout1d> layout;

  std::size_t n_u() const noexcept { return ju.rows(); }
  std::size_t n_u_enriched() const noexcept { return drdu.rows(); }
  std::size_t n_x() const noexcept { return dphidy.rows(); }
  std::size_t n_y() const noexcept { return dphidy.cols(); }

  /// Throws DimensionMismatch when the factor shapes disagree.
  void validate() const;
};

struct KktSystem {
  KktFactors factors;
  std::vector<double> g;  // objective gradient, N_u + N_y
  std::vector<double> r;  // DG residual, N_u
  PointCsrMatrix byy;

  std::size_t n_u() const noexcept { return factors.n_u(); }
  std::size_t n_y() const noexcept { return factors.n_y(); }
  std::size_t dimension() const noexcept { return 2 * n_u() + n_y(); }
  /// -(g, r)
  std::vector<double> rhs() const;
};

/// dphi^T (dRdx^T dRdx + kappa^2 dRmshdx^T dRmshdx + gamma D) dphi, exactly symmetric.
PointCsrMatrix assemble_byy(const KktFactors& f);

/// Validates the factors, checks vector lengths and assembles B_yy.
KktSystem make_kkt_system(KktFactors factors, std::vector<double> g, std::vector<double> r);

/// Copy of the system with dRdu zeroed, so B_uu = B_uy = 0.
KktSystem without_uu_coupling(const KktSystem& sys);

class KktOperator final : public LinearOperator {
 public:
  /// The system must outlive the operator.
  explicit KktOperator(const KktSystem& sys) : sys_(&sys) {}
  std::size_t dimension() const override { return sys_->dimension(); }
  void apply(std::span<const double> v, std::span<double> out) const override;
  using LinearOperator::apply;
  const KktSystem& system() const noexcept { return *sys_; }

 private:
  const KktSystem* sys_;
};

inline constexpr std::size_t kDefaultDenseCap = 5000;

/// Dense KKT matrix from basis-vector products, symmetrized as (A + A^T)/2.
/// Throws SizeCapExceeded above the cap.
DenseMatrix materialize_dense(const KktOperator& op, std::size_t cap = kDefaultDenseCap);

/// Throws SizeCapExceeded when n > cap.
void require_dense_cap(std::size_t n, std::size_t cap, const char* what);

/// Block pattern of A^T A, computed symbolically.
BlockPattern symbolic_gram_pattern(const BlockPattern& a);

struct SparsityRatio {
  double m1 = 0.0;  // average blocks per interior row of J_u
  double m2 = 0.0;  // average blocks per interior row of B_uu
  double ratio = 0.0;
  std::size_t interior_rows = 0;
};

/// Interior rows are rows of J_u with the maximal block count whose
/// off-diagonal neighbours also have the maximal count.
SparsityRatio count_block_sparsity(const BlockCsrMatrix& ju, const BlockPattern& buu_pattern);

}  // namespace kktp
