#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "kktp/dense.hpp"

namespace kktp {

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dimension() const = 0;
  /// y = A x. Must be const and re-entrant.
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  std::vector<double> apply(std::span<const double> x) const;
};

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual std::size_t dimension() const = 0;
  /// out = M^{-1} v. Must be const and re-entrant.
  virtual void apply_inverse(std::span<const double> v, std::span<double> out) const = 0;
  std::vector<double> apply_inverse(std::span<const double> v) const;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  explicit IdentityPreconditioner(std::size_t n) : n_(n) {}
  std::size_t dimension() const override { return n_; }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  using Preconditioner::apply_inverse;

 private:
  std::size_t n_;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(DenseMatrix a);
  std::size_t dimension() const override { return a_.rows(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  using LinearOperator::apply;
  const DenseMatrix& matrix() const noexcept { return a_; }

 private:
  DenseMatrix a_;
};

/// Exact inverse through a dense LU factorization.
class DenseLuPreconditioner final : public Preconditioner {
 public:
  explicit DenseLuPreconditioner(const DenseMatrix& a);
  std::size_t dimension() const override { return lu_.size(); }
  void apply_inverse(std::span<const double> v, std::span<double> out) const override;
  using Preconditioner::apply_inverse;

 private:
  LuFactor lu_;
};

/// Adapts a callable; used by tests and for composing operators.
class FunctionOperator final : public LinearOperator {
 public:
  using Fn = std::function<void(std::span<const double>, std::span<double>)>;
  FunctionOperator(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {}
  std::size_t dimension() const override { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const override { fn_(x, y); }
  using LinearOperator::apply;

 private:
  std::size_t n_;
  Fn fn_;
};

/// Dense matrix of a linear operator, built column by column.
DenseMatrix materialize(const LinearOperator& a);
/// Dense matrix of M^{-1}, built column by column.
DenseMatrix materialize_inverse(const Preconditioner& m);

enum class CriterionKind { PreconditionedResidual, ExactSolution };
const char* to_string(CriterionKind kind) noexcept;

struct PreconditionedResidual {};
struct ExactSolution {
  std::vector<double> reference;
};
using Criterion = std::variant<PreconditionedResidual, ExactSolution>;

inline constexpr double kDefaultGmresTol = 1e-3;
inline constexpr std::size_t kDefaultGmresMaxIters = 1000;

struct GmresConfig {
  double tol = kDefaultGmresTol;
  std::size_t max_iters = kDefaultGmresMaxIters;
  Criterion criterion = PreconditionedResidual{};

  /// Throws InvalidArgument when tol <= 0 or max_iters == 0.
  void validate() const;
  CriterionKind kind() const noexcept;
};

struct SolveReport {
  std::vector<double> solution;
  std::size_t iterations = 0;
  bool converged = false;
  /// Criterion value after each iteration; size() == iterations.
  std::vector<double> history;
  CriterionKind criterion = CriterionKind::PreconditionedResidual;
  /// True when the Arnoldi process terminated because the Krylov space became invariant.
  bool breakdown = false;
};

/// Left-preconditioned GMRES without restart, zero initial guess, modified
/// Gram-Schmidt and Givens rotations. Throws NonFinite if b or any Arnoldi
/// vector is not finite, DimensionMismatch on inconsistent sizes.
SolveReport gmres_solve(const LinearOperator& a, std::span<const double> b, const Preconditioner& m,
                        const GmresConfig& cfg = {});

/// ||M^{-1}(A s - b)|| / ||M^{-1} b||, or ||s_ex - s|| / ||s_ex||.
/// Throws ZeroReference when the denominator is below 1e-300 and
/// InvalidArgument when s_ex is given for the residual kind or missing for the exact kind.
double evaluate_criterion(CriterionKind kind, const LinearOperator& a, const Preconditioner& m,
                          std::span<const double> b, std::span<const double> s,
                          std::optional<std::span<const double>> s_ex = std::nullopt);

}  // namespace kktp
