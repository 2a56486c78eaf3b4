#pragma once

// Block anti-triangular constrained preconditioner
//
//        [ 0      0     Ju~^T ]
//   A~ = [ 0      Byy~  Jy^T  ]
//        [ Ju~    Jy    0     ]
//
// applied by three sub-solves and two products, plus the variant catalog.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kktp/dense.hpp"
#include "kktp/dg_precond.hpp"
#include "kktp/kkt.hpp"
#include "kktp/krylov.hpp"
#include "kktp/point_csr.hpp"
#include "kktp/point_precond.hpp"

namespace kktp {

enum class JuKind { Exact, BlockJacobi, Bilu };
enum class ByyKind { Exact, PointJacobi, PointIlu0 };

/// Exact inverse with transpose solves, through a dense LU.
class DenseLuTransposable final : public TransposablePreconditioner {
 public:
  explicit DenseLuTransposable(const DenseMatrix& a) : lu_(dense_lu_factor(a)) {}
  std::size_t dimension() const override { return lu_.size(); }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  void apply_transpose_inverse(std::span<const double> v, std::span<double> out) const override;
  using TransposablePreconditioner::apply_inverse;
  using TransposablePreconditioner::apply_transpose_inverse;

 private:
  LuFactor lu_;
};

class JuApprox {
 public:
  JuApprox(JuKind kind, std::unique_ptr<TransposablePreconditioner> impl);
  /// Exact variant uses a dense LU capped at dense_cap unknowns.
  static JuApprox build(JuKind kind, const BlockCsrMatrix& ju, std::size_t dense_cap = kDefaultDenseCap);

  JuKind kind() const noexcept { return kind_; }
  std::size_t dimension() const { return impl_->dimension(); }
  void solve(std::span<const double> v, std::span<double> out) const { impl_->apply_inverse(v, out); }
  void solve_transpose(std::span<const double> v, std::span<double> out) const {
    impl_->apply_transpose_inverse(v, out);
  }
  const TransposablePreconditioner& impl() const noexcept { return *impl_; }

 private:
  JuKind kind_;
  std::unique_ptr<TransposablePreconditioner> impl_;
};

class ByyApprox {
 public:
  ByyApprox(ByyKind kind, std::unique_ptr<Preconditioner> impl);
  static ByyApprox build(ByyKind kind, const PointCsrMatrix& byy, std::size_t dense_cap = kDefaultDenseCap);

  ByyKind kind() const noexcept { return kind_; }
  std::size_t dimension() const { return impl_->dimension(); }
  void solve(std::span<const double> v, std::span<double> out) const { impl_->apply_inverse(v, out); }
  const Preconditioner& impl() const noexcept { return *impl_; }

 private:
  ByyKind kind_;
  std::unique_ptr<Preconditioner> impl_;
};

class AtPreconditioner final : public Preconditioner {
 public:
  AtPreconditioner(JuApprox ju, ByyApprox byy, PointCsrMatrix jy);

  std::size_t dimension() const override { return 2 * n_u_ + n_y_; }
  /// (1) Ju~^T w1 = v1  (2) t2 = Jy^T w1  (3) Byy~ w2 = v2 - t2
  /// (4) t3 = Jy w2     (5) Ju~ w3 = v3 - t3;  result (w3, w2, w1).
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  using Preconditioner::apply_inverse;

  const JuApprox& ju() const noexcept { return ju_; }
  const ByyApprox& byy() const noexcept { return byy_; }
  const PointCsrMatrix& jy() const noexcept { return jy_; }

 private:
  JuApprox ju_;
  ByyApprox byy_;
  PointCsrMatrix jy_;
  std::size_t n_u_;
  std::size_t n_y_;
};

struct AtVariant {
  JuKind ju = JuKind::Exact;
  ByyKind byy = ByyKind::Exact;
  bool multigrid = false;
  friend bool operator==(const AtVariant&, const AtVariant&) = default;
};

/// A0, BJ, BILU, BJ-ilu, BILU-ilu, A0-p0, BJ-p0, BILU-p0.
const std::vector<std::string>& catalog_names();
/// Throws UnknownVariant.
AtVariant parse_variant(std::string_view name);
std::string variant_name(const AtVariant& v);

struct AtBuildOptions {
  std::size_t dense_cap = kDefaultDenseCap;
};

/// Anti-triangular preconditioner of the system (no multigrid wrapper).
std::unique_ptr<AtPreconditioner> build_at_core(const KktSystem& sys, const AtVariant& variant,
                                                const AtBuildOptions& opts = {});

/// Catalog entry; *-p0 variants wrap the core in the two-level p-multigrid
/// cycle, which needs sys.factors.layout. The system must outlive the result.
std::unique_ptr<Preconditioner> build_at_preconditioner(const KktSystem& sys, std::string_view name,
                                                        const AtBuildOptions& opts = {});
std::unique_ptr<Preconditioner> build_at_preconditioner(const KktSystem& sys, const AtVariant& variant,
                                                        const AtBuildOptions& opts = {});

/// Applies the inverse of [[G, J^T], [J, 0]] through G^{-1} and the Schur
/// complement S = J G^{-1} J^T. Validation path for nonsingular G only.
/// Throws SingularSchurComplement.
std::vector<double> generic_constrained_inverse(const DenseMatrix& g, const DenseMatrix& j, std::span<const double> v);

}  // namespace kktp
