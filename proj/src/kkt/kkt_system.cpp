#include <algorithm>
#include <string>

#include "kktp/error.hpp"
#include "kktp/kkt.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

void KktFactors::validate() const {
  const std::size_t nu = n_u(), nup = n_u_enriched(), nx = n_x(), ny = n_y();
  require_same_size(ju.cols(), nu, "Ju columns");
  require_same_size(drdu.cols(), nu, "dRdu columns");
  require_same_size(drdx.rows(), nup, "dRdx rows");
  require_same_size(drdx.cols(), nx, "dRdx columns");
  require_same_size(drmshdx.cols(), nx, "dRmshdx columns");
  require_same_size(d.rows(), nx, "D rows");
  require_same_size(d.cols(), nx, "D columns");
  require_same_size(jy.rows(), nu, "Jy rows");
  require_same_size(jy.cols(), ny, "Jy columns");
  if (!(kappa >= 0.0) || !(gamma >= 0.0)) throw_error(ErrorCode::InvalidArgument, "kappa and gamma must be >= 0");
}

std::vector<double> KktSystem::rhs() const {
  std::vector<double> b(dimension());
  for (std::size_t i = 0; i < g.size(); ++i) b[i] = -g[i];
  for (std::size_t i = 0; i < r.size(); ++i) b[g.size() + i] = -r[i];
  return b;
}

PointCsrMatrix assemble_byy(const KktFactors& f) {
  f.validate();
  PointCsrMatrix bxx = gram(block_to_point(f.drdx));
  bxx = add(1.0, bxx, f.kappa * f.kappa, gram(f.drmshdx));
  bxx = add(1.0, bxx, f.gamma, f.d);
  return congruence(f.dphidy, bxx);
}

KktSystem make_kkt_system(KktFactors factors, std::vector<double> g, std::vector<double> r) {
  factors.validate();
  require_same_size(g.size(), factors.n_u() + factors.n_y(), "gradient length");
  require_same_size(r.size(), factors.n_u(), "residual length");
  KktSystem sys;
  sys.byy = assemble_byy(factors);
  sys.factors = std::move(factors);
  sys.g = std::move(g);
  sys.r = std::move(r);
  return sys;
}

KktSystem without_uu_coupling(const KktSystem& sys) {
  KktSystem out = sys;
  auto v = out.factors.drdu.values();
  std::fill(v.begin(), v.end(), 0.0);
  return out;
}

void KktOperator::apply(std::span<const double> v, std::span<double> out) const {
  const KktFactors& f = sys_->factors;
  const std::size_t nu = f.n_u(), ny = f.n_y();
  require_same_size(v.size(), dimension(), "kkt_matvec input");
  require_same_size(out.size(), dimension(), "kkt_matvec output");
  const auto vu = v.subspan(0, nu), vy = v.subspan(nu, ny), vl = v.subspan(nu + ny, nu);
  auto ou = out.subspan(0, nu), oy = out.subspan(nu, ny), ol = out.subspan(nu + ny, nu);

  // Gauss-Newton rows: t = dRdu vu + dRdx dphi vy, then dRdu^T t.
  const std::vector<double> dx = f.dphidy.matvec(vy);
  std::vector<double> t = f.drdx.matvec(dx);
  const std::vector<double> ru = f.drdu.matvec(vu);
  simd::axpy(1.0, ru, t);
  f.drdu.transpose_matvec(t, ou);
  const std::vector<double> jtl = f.ju.transpose_matvec(vl);
  simd::axpy(1.0, jtl, ou);

  // B_uy^T vu = dphi^T dRdx^T (dRdu vu)
  const std::vector<double> xu = f.drdx.transpose_matvec(ru);
  f.dphidy.transpose_matvec(xu, oy);
  sys_->byy.matvec_add(1.0, vy, oy);
  const std::vector<double> jyl = f.jy.transpose_matvec(vl);
  simd::axpy(1.0, jyl, oy);

  f.ju.matvec(vu, ol);
  f.jy.matvec_add(1.0, vy, ol);
}

void require_dense_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap)
    throw_error(ErrorCode::SizeCapExceeded,
                std::string(what) + ": dimension " + std::to_string(n) + " exceeds dense cap " + std::to_string(cap));
}

DenseMatrix materialize_dense(const KktOperator& op, std::size_t cap) {
  require_dense_cap(op.dimension(), cap, "materialize_dense");
  DenseMatrix a = materialize(op);
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = s;
      a(j, i) = s;
    }
  return a;
}

}  // namespace kktp
