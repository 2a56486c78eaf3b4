#include "kktp/point_precond.hpp"

#include <cmath>
#include <string>

#include "kktp/error.hpp"

namespace kktp {

PointJacobi point_jacobi(const PointCsrMatrix& b) {
  if (b.rows() != b.cols()) throw_error(ErrorCode::DimensionMismatch, "point Jacobi needs a square matrix");
  PointJacobi p;
  p.inv_diag_ = b.diagonal();
  for (double& d : p.inv_diag_) {
    if (std::fabs(d) < 1e-300) {
      d = 1.0;
      ++p.safeguarded_count_;
    } else {
      d = 1.0 / d;
    }
  }
  return p;
}

void PointJacobi::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "point Jacobi input");
  require_same_size(out.size(), dimension(), "point Jacobi output");
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = inv_diag_[i] * v[i];
}

PointIlu0 point_ilu0_factor(const PointCsrMatrix& b) {
  if (b.rows() != b.cols()) throw_error(ErrorCode::DimensionMismatch, "ILU0 needs a square matrix");
  PointIlu0 f;
  f.lu_ = b;
  const std::size_t n = b.rows();
  const auto rp = f.lu_.row_ptr();
  const auto ci = f.lu_.col_idx();
  auto v = f.lu_.values();
  f.diag_pos_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = f.lu_.find(i, i);
    if (!k) throw_error(ErrorCode::ZeroPivot, "row " + std::to_string(i) + " has no diagonal entry", i);
    f.diag_pos_[i] = *k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t pk = rp[i]; pk < f.diag_pos_[i]; ++pk) {
      const std::size_t k = ci[pk];
      v[pk] /= v[f.diag_pos_[k]];
      const double lik = v[pk];
      std::size_t pj = pk + 1;
      for (std::size_t pkj = f.diag_pos_[k] + 1; pkj < rp[k + 1]; ++pkj) {
        const std::size_t j = ci[pkj];
        while (pj < rp[i + 1] && ci[pj] < j) ++pj;
        if (pj < rp[i + 1] && ci[pj] == j) v[pj] -= lik * v[pkj];
      }
    }
    const double d = v[f.diag_pos_[i]];
    if (!std::isfinite(d) || std::fabs(d) < 1e-300)
      throw_error(ErrorCode::ZeroPivot, "zero pivot in row " + std::to_string(i), i);
  }
  return f;
}

void PointIlu0::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "ILU0 input");
  require_same_size(out.size(), dimension(), "ILU0 output");
  const auto rp = lu_.row_ptr();
  const auto ci = lu_.col_idx();
  const auto a = lu_.values();
  const std::size_t n = dimension();
  for (std::size_t i = 0; i < n; ++i) {
    double s = v[i];
    for (std::size_t k = rp[i]; k < diag_pos_[i]; ++k) s -= a[k] * out[ci[k]];
    out[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = out[i];
    for (std::size_t k = diag_pos_[i] + 1; k < rp[i + 1]; ++k) s -= a[k] * out[ci[k]];
    out[i] = s / a[diag_pos_[i]];
  }
}

DenseMatrix PointIlu0::dense_lower() const {
  DenseMatrix l = DenseMatrix::identity(dimension());
  for (std::size_t i = 0; i < dimension(); ++i)
    for (std::size_t k = lu_.row_ptr()[i]; k < diag_pos_[i]; ++k) l(i, lu_.col_idx()[k]) = lu_.values()[k];
  return l;
}

DenseMatrix PointIlu0::dense_upper() const {
  DenseMatrix u(dimension(), dimension());
  for (std::size_t i = 0; i < dimension(); ++i)
    for (std::size_t k = diag_pos_[i]; k < lu_.row_ptr()[i + 1]; ++k) u(i, lu_.col_idx()[k]) = lu_.values()[k];
  return u;
}

}  // namespace kktp
