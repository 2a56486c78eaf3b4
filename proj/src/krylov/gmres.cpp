#include <algorithm>
#include <cmath>

#include "kktp/error.hpp"
#include "kktp/krylov.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

std::vector<double> LinearOperator::apply(std::span<const double> x) const {
  std::vector<double> y(dimension());
  apply(x, y);
  return y;
}

std::vector<double> Preconditioner::apply_inverse(std::span<const double> v) const {
  std::vector<double> out(dimension());
  apply_inverse(v, out);
  return out;
}

void IdentityPreconditioner::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), n_, "IdentityPreconditioner input");
  require_same_size(out.size(), n_, "IdentityPreconditioner output");
  std::copy(v.begin(), v.end(), out.begin());
}

DenseOperator::DenseOperator(DenseMatrix a) : a_(std::move(a)) {
  if (!a_.square()) throw_error(ErrorCode::DimensionMismatch, "DenseOperator needs a square matrix");
}

void DenseOperator::apply(std::span<const double> x, std::span<double> y) const { a_.multiply(x, y); }

DenseLuPreconditioner::DenseLuPreconditioner(const DenseMatrix& a) : lu_(dense_lu_factor(a)) {}

void DenseLuPreconditioner::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), lu_.size(), "DenseLuPreconditioner input");
  require_same_size(out.size(), lu_.size(), "DenseLuPreconditioner output");
  std::copy(v.begin(), v.end(), out.begin());
  lu_.solve_in_place(out);
}

DenseMatrix materialize(const LinearOperator& a) {
  const std::size_t n = a.dimension();
  DenseMatrix d(n, n);
  std::vector<double> e(n, 0.0), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    a.apply(e, col);
    d.set_column(j, col);
    e[j] = 0.0;
  }
  return d;
}

DenseMatrix materialize_inverse(const Preconditioner& m) {
  const std::size_t n = m.dimension();
  DenseMatrix d(n, n);
  std::vector<double> e(n, 0.0), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.apply_inverse(e, col);
    d.set_column(j, col);
    e[j] = 0.0;
  }
  return d;
}

const char* to_string(CriterionKind kind) noexcept {
  switch (kind) {
    case CriterionKind::PreconditionedResidual: return "residual";
    case CriterionKind::ExactSolution: return "exact";
  }
  return "unknown";
}

void GmresConfig::validate() const {
  if (!(tol > 0.0)) throw_error(ErrorCode::InvalidArgument, "GMRES tolerance must be positive");
  if (max_iters == 0) throw_error(ErrorCode::InvalidArgument, "GMRES max_iters must be at least 1");
}

CriterionKind GmresConfig::kind() const noexcept {
  return std::holds_alternative<ExactSolution>(criterion) ? CriterionKind::ExactSolution
                                                          : CriterionKind::PreconditionedResidual;
}

namespace {

constexpr double kZeroReference = 1e-300;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double relative_error(std::span<const double> ref, std::span<const double> s) {
  const double denom = simd::norm2(ref);
  if (!(denom >= kZeroReference)) throw_error(ErrorCode::ZeroReference, "reference solution norm is zero");
  std::vector<double> d(ref.begin(), ref.end());
  simd::axpy(-1.0, s, d);
  return simd::norm2(d) / denom;
}

// Upper-triangular solve R y = g on the leading k x k part of the Hessenberg
// matrix (column-major storage, leading dimension ld), then x = V y.
void form_iterate(const std::vector<double>& h, std::size_t ld, const std::vector<double>& g, std::size_t k,
                  const std::vector<std::vector<double>>& basis, std::vector<double>& x) {
  std::vector<double> y(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k));
  for (std::size_t ii = k; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < k; ++j) y[ii] -= h[j * ld + ii] * y[j];
    y[ii] /= h[ii * ld + ii];
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t j = 0; j < k; ++j) simd::axpy(y[j], basis[j], x);
}

}  // namespace

SolveReport gmres_solve(const LinearOperator& a, std::span<const double> b, const Preconditioner& m,
                        const GmresConfig& cfg) {
  cfg.validate();
  const std::size_t n = a.dimension();
  require_same_size(b.size(), n, "gmres_solve right-hand side");
  require_same_size(m.dimension(), n, "gmres_solve preconditioner");
  if (!all_finite(b)) throw_error(ErrorCode::NonFinite, "right-hand side is not finite");

  const auto* exact = std::get_if<ExactSolution>(&cfg.criterion);
  if (exact) require_same_size(exact->reference.size(), n, "gmres_solve reference solution");

  SolveReport rep;
  rep.criterion = cfg.kind();
  rep.solution.assign(n, 0.0);

  std::vector<double> r0 = m.apply_inverse(b);
  if (!all_finite(r0)) throw_error(ErrorCode::NonFinite, "preconditioned right-hand side is not finite");
  const double beta = simd::norm2(r0);
  if (beta == 0.0) {
    // x = 0 is the exact answer; the exact criterion still needs a nonzero reference to be meaningful.
    rep.converged = !exact || simd::norm2(exact->reference) == 0.0;
    return rep;
  }

  const std::size_t kmax = std::min(cfg.max_iters, n);
  const std::size_t ld = kmax + 1;
  std::vector<std::vector<double>> basis;
  basis.reserve(kmax + 1);
  for (double& v : r0) v /= beta;
  basis.push_back(std::move(r0));

  std::vector<double> h(ld * kmax, 0.0);  // column j holds H(0..j+1, j)
  std::vector<double> cs(kmax), sn(kmax);
  std::vector<double> g(ld, 0.0);
  g[0] = beta;
  std::vector<double> w(n), aw(n);

  std::size_t k = 0;
  while (k < cfg.max_iters) {
    if (k == kmax) break;  // Krylov dimension exhausted without meeting the tolerance
    a.apply(basis[k], aw);
    m.apply_inverse(aw, w);
    if (!all_finite(w)) throw_error(ErrorCode::NonFinite, "Arnoldi vector is not finite", k);
    const double w_norm0 = simd::norm2(w);

    double* hk = h.data() + k * ld;
    for (std::size_t i = 0; i <= k; ++i) {
      hk[i] = simd::dot(w, basis[i]);
      simd::axpy(-hk[i], basis[i], w);
    }
    const double hnext = simd::norm2(w);
    hk[k + 1] = hnext;

    for (std::size_t i = 0; i < k; ++i) {
      const double t = cs[i] * hk[i] + sn[i] * hk[i + 1];
      hk[i + 1] = -sn[i] * hk[i] + cs[i] * hk[i + 1];
      hk[i] = t;
    }
    const double rho = std::hypot(hk[k], hk[k + 1]);
    const bool breakdown = !(hnext > 1e-14 * w_norm0);
    if (rho == 0.0) {
      // Singular Hessenberg column: the preconditioned operator is singular on the Krylov space.
      rep.breakdown = true;
      break;
    }
    cs[k] = hk[k] / rho;
    sn[k] = hk[k + 1] / rho;
    hk[k] = rho;
    hk[k + 1] = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    ++k;

    double value;
    if (exact) {
      form_iterate(h, ld, g, k, basis, rep.solution);
      value = relative_error(exact->reference, rep.solution);
    } else {
      value = std::fabs(g[k]) / beta;
    }
    rep.history.push_back(value);
    rep.iterations = k;
    if (value < cfg.tol) {
      rep.converged = true;
      break;
    }
    if (breakdown) {
      rep.breakdown = true;
      break;
    }
    for (double& v : w) v /= hnext;
    basis.push_back(w);
  }

  if (!exact && k > 0) form_iterate(h, ld, g, k, basis, rep.solution);
  return rep;
}

double evaluate_criterion(CriterionKind kind, const LinearOperator& a, const Preconditioner& m,
                          std::span<const double> b, std::span<const double> s,
                          std::optional<std::span<const double>> s_ex) {
  if (kind == CriterionKind::ExactSolution) {
    if (!s_ex) throw_error(ErrorCode::InvalidArgument, "exact criterion needs a reference solution");
    require_same_size(s_ex->size(), s.size(), "evaluate_criterion reference");
    return relative_error(*s_ex, s);
  }
  if (s_ex) throw_error(ErrorCode::InvalidArgument, "residual criterion takes no reference solution");
  const std::size_t n = a.dimension();
  require_same_size(b.size(), n, "evaluate_criterion rhs");
  require_same_size(s.size(), n, "evaluate_criterion iterate");
  const std::vector<double> mb = m.apply_inverse(b);
  const double denom = simd::norm2(mb);
  if (!(denom >= kZeroReference)) throw_error(ErrorCode::ZeroReference, "preconditioned right-hand side is zero");
  std::vector<double> r = a.apply(s);
  simd::axpy(-1.0, b, r);
  return simd::norm2(m.apply_inverse(r)) / denom;
}

}  // namespace kktp
