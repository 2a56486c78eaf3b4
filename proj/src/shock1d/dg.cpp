#include <string>

#include "kktp/error.hpp"
#include "kktp/shock1d.hpp"

namespace kktp::shock1d {
namespace {

double source_value(const ShockTrackProblem1d& prob, double u) { return prob.source ? u : 0.0; }
double source_derivative(const ShockTrackProblem1d& prob) { return prob.source ? 1.0 : 0.0; }

// Tabulated trial, test and geometry bases at the quadrature points and at
// the element end points.
struct Tables {
  std::size_t nq, nt, nu, ng;
  GaussRule rule;
  std::vector<std::vector<double>> phi, psi, dpsi, dgeo;
  std::vector<double> phi_l, phi_r, psi_l, psi_r;

  Tables(const ShockTrackProblem1d& prob, std::size_t test_degree)
      : rule(gauss_legendre(prob.quadrature_points())) {
    const LagrangeBasis trial(prob.p), test(test_degree), geo(prob.q);
    nq = rule.points.size();
    nu = trial.size();
    nt = test.size();
    ng = geo.size();
    for (double xi : rule.points) {
      phi.push_back(trial.eval(xi));
      psi.push_back(test.eval(xi));
      dpsi.push_back(test.eval_derivative(xi));
      dgeo.push_back(geo.eval_derivative(xi));
    }
    phi_l = trial.eval(-1.0);
    phi_r = trial.eval(1.0);
    psi_l = test.eval(-1.0);
    psi_r = test.eval(1.0);
  }
};

double dot_local(const std::vector<double>& basis, std::span<const double> coeffs, std::size_t offset) {
  double s = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) s += basis[j] * coeffs[offset + j];
  return s;
}

// Face fluxes: face f sits between elements f-1 and f (face 0 and face n_elem
// are the domain boundaries).
std::vector<NumericalFlux> face_fluxes(const ShockTrackProblem1d& prob, const Tables& t, std::span<const double> u) {
  const std::size_t ne = prob.n_elem;
  std::vector<NumericalFlux> faces(ne + 1);
  for (std::size_t f = 0; f <= ne; ++f) {
    const double ul = f == 0 ? prob.bc_left : dot_local(t.phi_r, u, (f - 1) * t.nu);
    const double ur = f == ne ? prob.bc_right : dot_local(t.phi_l, u, f * t.nu);
    faces[f] = godunov_flux(prob.flux, ul, ur);
  }
  return faces;
}

void check_inputs(const ShockTrackProblem1d& prob, std::span<const double> u, std::span<const double> x,
                  std::size_t test_degree) {
  prob.validate();
  require_same_size(u.size(), prob.n_u(), "DG solution coefficients");
  if (test_degree != prob.p && test_degree != prob.p + 1)
    throw_error(ErrorCode::InvalidArgument, "test degree must be p or p + 1");
  check_mesh(prob, x);
}

}  // namespace

std::vector<double> dg_residual(const ShockTrackProblem1d& prob, std::span<const double> u, std::span<const double> x,
                                std::size_t test_degree) {
  check_inputs(prob, u, x, test_degree);
  const Tables t(prob, test_degree);
  const auto faces = face_fluxes(prob, t, u);
  std::vector<double> r(prob.n_elem * t.nt, 0.0);
  for (std::size_t e = 0; e < prob.n_elem; ++e) {
    double* re = r.data() + e * t.nt;
    for (std::size_t g = 0; g < t.nq; ++g) {
      const double ug = dot_local(t.phi[g], u, e * t.nu);
      double xxi = 0.0;
      for (std::size_t a = 0; a < t.ng; ++a) xxi += t.dgeo[g][a] * x[prob.q * e + a];
      const double w = t.rule.weights[g];
      const double fv = flux(prob.flux, ug), sv = source_value(prob, ug);
      for (std::size_t i = 0; i < t.nt; ++i) re[i] -= w * (fv * t.dpsi[g][i] + t.psi[g][i] * sv * xxi);
    }
    for (std::size_t i = 0; i < t.nt; ++i)
      re[i] += t.psi_r[i] * faces[e + 1].value - t.psi_l[i] * faces[e].value;
  }
  return r;
}

ResidualDerivatives dg_derivatives(const ShockTrackProblem1d& prob, std::span<const double> u,
                                   std::span<const double> x, std::size_t test_degree) {
  check_inputs(prob, u, x, test_degree);
  const Tables t(prob, test_degree);
  const auto faces = face_fluxes(prob, t, u);
  const std::size_t ne = prob.n_elem;

  BlockCsrBuilder du(std::vector<std::size_t>(ne, t.nt), std::vector<std::size_t>(ne, t.nu));
  BlockCsrBuilder dx(std::vector<std::size_t>(ne, t.nt), std::vector<std::size_t>(prob.n_x(), 1));
  const double ds = source_derivative(prob);

  for (std::size_t e = 0; e < ne; ++e) {
    DenseMatrix diag(t.nt, t.nu);
    DenseMatrix mesh(t.nt, t.ng);
    for (std::size_t g = 0; g < t.nq; ++g) {
      const double ug = dot_local(t.phi[g], u, e * t.nu);
      double xxi = 0.0;
      for (std::size_t a = 0; a < t.ng; ++a) xxi += t.dgeo[g][a] * x[prob.q * e + a];
      const double w = t.rule.weights[g];
      const double df = flux_derivative(prob.flux, ug), sv = source_value(prob, ug);
      for (std::size_t i = 0; i < t.nt; ++i) {
        const double coef = w * (df * t.dpsi[g][i] + t.psi[g][i] * ds * xxi);
        for (std::size_t j = 0; j < t.nu; ++j) diag(i, j) -= coef * t.phi[g][j];
        for (std::size_t a = 0; a < t.ng; ++a) mesh(i, a) -= w * t.psi[g][i] * sv * t.dgeo[g][a];
      }
    }
    // Own traces: left state of the right face, right state of the left face.
    for (std::size_t i = 0; i < t.nt; ++i)
      for (std::size_t j = 0; j < t.nu; ++j)
        diag(i, j) += t.psi_r[i] * faces[e + 1].d_left * t.phi_r[j] - t.psi_l[i] * faces[e].d_right * t.phi_l[j];
    du.add(e, e, diag);

    if (e > 0) {
      DenseMatrix left(t.nt, t.nu);
      for (std::size_t i = 0; i < t.nt; ++i)
        for (std::size_t j = 0; j < t.nu; ++j) left(i, j) = -t.psi_l[i] * faces[e].d_left * t.phi_r[j];
      du.add(e, e - 1, left);
    }
    if (e + 1 < ne) {
      DenseMatrix right(t.nt, t.nu);
      for (std::size_t i = 0; i < t.nt; ++i)
        for (std::size_t j = 0; j < t.nu; ++j) right(i, j) = t.psi_r[i] * faces[e + 1].d_right * t.phi_l[j];
      du.add(e, e + 1, right);
    }
    for (std::size_t a = 0; a < t.ng; ++a) {
      DenseMatrix col(t.nt, 1);
      for (std::size_t i = 0; i < t.nt; ++i) col(i, 0) = mesh(i, a);
      dx.add(e, prob.q * e + a, col);
    }
  }
  return {du.build(), dx.build()};
}

DgJacobians dg_jacobians(const ShockTrackProblem1d& prob, std::span<const double> u, std::span<const double> x) {
  ResidualDerivatives low = dg_derivatives(prob, u, x, prob.p);
  ResidualDerivatives high = dg_derivatives(prob, u, x, prob.p_enriched());
  return {std::move(low.du), std::move(high.du), std::move(high.dx), std::move(low.dx)};
}

}  // namespace kktp::shock1d
