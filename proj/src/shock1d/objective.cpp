#include "kktp/error.hpp"
#include "kktp/shock1d.hpp"

namespace kktp::shock1d {

ObjectiveValue objective_and_gradient(const ShockTrackProblem1d& prob, std::span<const double> u,
                                      std::span<const double> y, double kappa) {
  const std::vector<double> x = phi_map(prob, y);
  const ResidualDerivatives d = dg_derivatives(prob, u, x, prob.p_enriched());
  const std::vector<double> big_r = dg_residual(prob, u, x, prob.p_enriched());
  const MeshDistortion msh = mesh_distortion(prob, x);

  ObjectiveValue out;
  for (double v : big_r) out.f_err += 0.5 * v * v;
  double dist = 0.0;
  for (double v : msh.r) dist += 0.5 * v * v;
  out.f = out.f_err + kappa * kappa * dist;

  const std::vector<double> gu = d.du.transpose_matvec(big_r);
  std::vector<double> gx = d.dx.transpose_matvec(big_r);
  const std::vector<double> gmsh = msh.jacobian.transpose_matvec(msh.r);
  for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += kappa * kappa * gmsh[i];
  const std::vector<double> gy = dphi_dy(prob).transpose_matvec(gx);

  out.g.reserve(gu.size() + gy.size());
  out.g.insert(out.g.end(), gu.begin(), gu.end());
  out.g.insert(out.g.end(), gy.begin(), gy.end());
  return out;
}

KktSystem build_kkt(const ShockTrackProblem1d& prob, const DgState& state) {
  require_same_size(state.u.size(), prob.n_u(), "state u");
  require_same_size(state.y.size(), prob.n_y(), "state y");
  const std::vector<double> x = phi_map(prob, state.y);
  DgJacobians jac = dg_jacobians(prob, state.u, x);
  MeshDistortion msh = mesh_distortion(prob, x);

  KktFactors f;
  f.dphidy = dphi_dy(prob);
  f.jy = multiply(block_to_point(jac.drdx), f.dphidy);
  f.ju = std::move(jac.ju);
  f.drdu = std::move(jac.drdu);
  f.drdx = std::move(jac.drdx_enriched);
  f.drmshdx = std::move(msh.jacobian);
  f.d = elasticity_D(prob);
  f.kappa = state.kappa;
  f.gamma = state.gamma;
  f.layout = prob.layout();

  ObjectiveValue obj = objective_and_gradient(prob, state.u, state.y, state.kappa);
  std::vector<double> r = dg_residual(prob, state.u, x, prob.p);
  return make_kkt_system(std::move(f), std::move(obj.g), std::move(r));
}

std::vector<double> lagrangian_gradient(const ShockTrackProblem1d& prob, const DgState& state) {
  require_same_size(state.lambda.size(), prob.n_u(), "state multiplier");
  const KktSystem sys = build_kkt(prob, state);
  std::vector<double> grad = sys.g;
  const std::vector<double> ju_t = sys.factors.ju.transpose_matvec(state.lambda);
  const std::vector<double> jy_t = sys.factors.jy.transpose_matvec(state.lambda);
  for (std::size_t i = 0; i < ju_t.size(); ++i) grad[i] -= ju_t[i];
  for (std::size_t i = 0; i < jy_t.size(); ++i) grad[ju_t.size() + i] -= jy_t[i];
  return grad;
}

}  // namespace kktp::shock1d
