#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "kktp/error.hpp"
#include "kktp/kkt.hpp"
#include "kktp/rng.hpp"
#include "kktp/shock1d.hpp"

using namespace kktp;
using namespace kktp::shock1d;

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Smoothed initial state with random perturbations of u and of the interior nodes.
DgState random_state(const ShockTrackProblem1d& prob, std::uint64_t seed) {
  DgState s = smoothed_initial_state(prob, 0.08, 0.0, 0.0);
  Rng rng(seed);
  for (double& v : s.u) v += 0.2 * rng.uniform(-1, 1);
  const double h = 1.0 / static_cast<double>(prob.n_elem * prob.q);
  for (double& y : s.y) y += 0.2 * h * rng.uniform(-1, 1);
  return s;
}

}  // namespace

TEST_CASE("exact solution and flux examples") {
  CHECK(exact_solution(0.0) == doctest::Approx(0.4));
  CHECK(exact_solution(0.6 - 1e-12) == doctest::Approx(1.0));
  CHECK(exact_solution(0.6 + 1e-12) == doctest::Approx(-1.0));
  CHECK(exact_solution(1.0) == doctest::Approx(-0.6));
  CHECK(flux(FluxKind::Burgers, 1.0) == 0.5);
  CHECK(flux(FluxKind::Burgers, -1.0) == 0.5);
  CHECK(flux_derivative(FluxKind::Burgers, -3.0) == -3.0);
  CHECK(flux(FluxKind::Linear, -3.0) == -3.0);
  CHECK(flux_derivative(FluxKind::Linear, 7.0) == 1.0);
  // Piecewise ODE residual (u^2/2)' - u vanishes away from the shock.
  for (double x : {0.1, 0.3, 0.55, 0.7, 0.95}) {
    const double h = 1e-6;
    const double d = (flux(FluxKind::Burgers, exact_solution(x + h)) - flux(FluxKind::Burgers, exact_solution(x - h))) /
                     (2 * h);
    CHECK(std::fabs(d - exact_solution(x)) < 1e-8);
  }
}

TEST_CASE("Godunov flux cases and derivatives") {
  const auto shock = godunov_flux(FluxKind::Burgers, 1.0, -0.5);
  CHECK(shock.value == 0.5);
  CHECK(shock.d_left == 1.0);
  CHECK(shock.d_right == 0.0);
  const auto shock_r = godunov_flux(FluxKind::Burgers, 0.5, -1.0);
  CHECK(shock_r.value == 0.5);
  CHECK(shock_r.d_left == 0.0);
  CHECK(shock_r.d_right == -1.0);
  const auto fan_pos = godunov_flux(FluxKind::Burgers, 0.2, 0.8);
  CHECK(fan_pos.value == doctest::Approx(0.02));
  CHECK(fan_pos.d_left == doctest::Approx(0.2));
  const auto fan_neg = godunov_flux(FluxKind::Burgers, -0.8, -0.2);
  CHECK(fan_neg.value == doctest::Approx(0.02));
  CHECK(fan_neg.d_right == doctest::Approx(-0.2));
  const auto sonic = godunov_flux(FluxKind::Burgers, -0.3, 0.4);
  CHECK(sonic.value == 0.0);
  CHECK(sonic.d_left == 0.0);
  CHECK(sonic.d_right == 0.0);
  const auto tie_neg = godunov_flux(FluxKind::Burgers, -0.5, -0.5);
  CHECK(tie_neg.value == 0.125);
  CHECK(tie_neg.d_left == 0.0);
  CHECK(tie_neg.d_right == -0.5);
  const auto lin = godunov_flux(FluxKind::Linear, 2.0, -7.0);
  CHECK(lin.value == 2.0);
  CHECK(lin.d_left == 1.0);
  CHECK(lin.d_right == 0.0);
}

TEST_CASE("quadrature order and Gauss rules") {
  auto prob = make_problem(4, 1, 1);
  CHECK(prob.quadrature_points() == 3);
  prob = make_problem(4, 2, 2);
  CHECK(prob.quadrature_points() == 5);
  prob = make_problem(4, 3, 1);
  CHECK(prob.quadrature_points() == 5);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto g = gauss_legendre(n);
    for (std::size_t deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.points[i], static_cast<double>(deg));
      const double want = deg % 2 ? 0.0 : 2.0 / static_cast<double>(deg + 1);
      CHECK(std::fabs(s - want) < 1e-14);
    }
  }
}

TEST_CASE("Lagrange basis is nodal and sums to one") {
  for (std::size_t p = 0; p <= 4; ++p) {
    const LagrangeBasis b(p);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto v = b.eval(b.nodes()[i]);
      for (std::size_t j = 0; j < b.size(); ++j) CHECK(v[j] == doctest::Approx(i == j ? 1.0 : 0.0));
    }
    for (double xi : {-0.9, -0.1, 0.37, 1.0}) {
      const auto v = b.eval(xi);
      const auto d = b.eval_derivative(xi);
      double s = 0, ds = 0;
      for (std::size_t j = 0; j < b.size(); ++j) {
        s += v[j];
        ds += d[j];
      }
      CHECK(s == doctest::Approx(1.0));
      CHECK(std::fabs(ds) < 1e-12);
    }
  }
}

TEST_CASE("phi map inserts the pinned endpoints") {
  const auto prob = make_problem(2, 1, 1);
  CHECK(phi_map(prob, std::vector<double>{0.5}) == std::vector<double>{0.0, 0.5, 1.0});
  const auto p3 = make_problem(3, 1, 2);
  const auto d = oracle::from_point(dphi_dy(p3));
  REQUIRE(d.size() == 7);
  for (std::size_t c = 0; c < 5; ++c) {
    double s = 0;
    for (std::size_t r = 0; r < 7; ++r) s += d[r][c];
    CHECK(s == 1.0);
  }
  std::vector<double> y = free_coordinates(p3.reference_x);
  const auto x0 = phi_map(p3, y);
  y[2] += 0.01;
  const auto x1 = phi_map(p3, y);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < x0.size(); ++i) changed += x0[i] != x1[i];
  CHECK(changed == 1);
}

TEST_CASE("mesh validity checks report the inverted element") {
  const auto prob = make_problem(3, 1, 1);
  try {
    check_mesh(prob, std::vector<double>{0.0, 0.5, 0.4, 1.0});
    FAIL("expected InvertedElement");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvertedElement);
    CHECK(e.index() == 1);
  }
  const auto q2 = make_problem(1, 1, 2);
  CHECK_NOTHROW(check_mesh(q2, std::vector<double>{0.0, 0.5, 1.0}));
  CHECK_THROWS_AS(check_mesh(q2, std::vector<double>{0.0, 0.9, 1.0}), Error);
}

TEST_CASE("DG residual vanishes for trivial data and at the tracked exact state") {
  auto prob = make_problem(4, 2, 1);
  prob.source = false;
  prob.bc_left = 0.0;
  prob.bc_right = 0.0;
  const std::vector<double> zero(prob.n_u(), 0.0);
  CHECK(inf_norm(dg_residual(prob, zero, prob.reference_x, prob.p)) == 0.0);

  auto one = make_problem(1, 0, 1);
  one.source = false;
  one.bc_left = 0.3;
  one.bc_right = 0.3;
  CHECK(std::fabs(dg_residual(one, std::vector<double>{0.3}, one.reference_x, 0)[0]) < 1e-16);

  for (std::size_t p : {1, 2, 3})
    for (std::size_t q : {1, 2}) {
      const auto pr = make_problem(8, p, q);
      const auto st = tracked_exact_state(pr);
      const auto x = phi_map(pr, st.y);
      CHECK(inf_norm(dg_residual(pr, st.u, x, p)) <= 1e-12);
      CHECK(inf_norm(dg_residual(pr, st.u, x, p + 1)) <= 1e-12);
    }
}

TEST_CASE("residual for one p = 0 element by hand") {
  // r = F(c, bc_right) - F(bc_left, c) - c h with c = 0.5: 0.18 - 0.08 - 0.5.
  const auto prob = make_problem(1, 0, 1);
  const auto r = dg_residual(prob, std::vector<double>{0.5}, prob.reference_x, 0);
  CHECK(std::fabs(r[0] + 0.4) < 1e-15);
  // Enriched p' = 1 test functions (1 - xi)/2 and (1 + xi)/2.
  const auto rr = dg_residual(prob, std::vector<double>{0.5}, prob.reference_x, 1);
  CHECK(std::fabs(rr[0] + 0.205) < 1e-15);
  CHECK(std::fabs(rr[1] + 0.195) < 1e-15);
}

TEST_CASE("analytic DG Jacobians match central finite differences") {
  for (std::size_t p : {1, 2})
    for (std::size_t q : {1, 2})
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto prob = make_problem(5, p, q, 0.1, seed);
        const auto st = random_state(prob, seed + 10 * p + 100 * q);
        const auto x = phi_map(prob, st.y);
        for (std::size_t td : {p, p + 1}) {
          const auto d = dg_derivatives(prob, st.u, x, td);
          const auto fd_u = oracle::fd_jacobian(
              [&](const std::vector<double>& u) { return dg_residual(prob, u, x, td); }, st.u);
          const auto fd_x = oracle::fd_jacobian(
              [&](const std::vector<double>& xx) { return dg_residual(prob, st.u, xx, td); }, x);
          CHECK(oracle::max_column_rel_error(oracle::from_block(d.du), fd_u, 1e-8) <= 1e-6);
          CHECK(oracle::max_column_rel_error(oracle::from_block(d.dx), fd_x, 1e-8) <= 1e-6);
        }
      }
}

TEST_CASE("Ju is block tridiagonal and independent of u for the linear flux") {
  auto prob = make_problem(6, 2, 1);
  const auto st = smoothed_initial_state(prob, 0.05, 0.0, 0.0);
  const auto x = phi_map(prob, st.y);
  const auto jac = dg_jacobians(prob, st.u, x);
  const auto& p = jac.ju.pattern();
  for (std::size_t e = 1; e + 1 < prob.n_elem; ++e) CHECK(p.row_ptr[e + 1] - p.row_ptr[e] == 3);
  for (std::size_t k = 0; k < jac.ju.nnz_blocks(); ++k) {
    const std::size_t I = jac.ju.block_row(k), J = jac.ju.block_col(k);
    CHECK((I > J ? I - J : J - I) <= 1);
  }
  prob.flux = FluxKind::Linear;
  Rng rng(2);
  const auto u2 = rng.vector(prob.n_u());
  const auto a = oracle::from_block(dg_jacobians(prob, st.u, x).ju);
  const auto b = oracle::from_block(dg_jacobians(prob, u2, x).ju);
  CHECK(a == b);
}

TEST_CASE("mesh distortion examples and Jacobian") {
  const auto prob = make_problem(4, 1, 1);
  CHECK(inf_norm(mesh_distortion(prob, prob.reference_x).r) == 0.0);
  // Element 0 stretched to twice its reference length 0.25.
  const std::vector<double> x{0.0, 0.5, 0.55, 0.75, 1.0};
  const auto md = mesh_distortion(prob, x);
  CHECK(md.r[0] == doctest::Approx(0.5).epsilon(1e-14));
  for (std::size_t q : {1, 2}) {
    const auto pr = make_problem(4, 1, q, 0.15, 3);
    const auto st = random_state(pr, 4);
    const auto xx = phi_map(pr, st.y);
    const auto fd = oracle::fd_jacobian([&](const std::vector<double>& v) { return mesh_distortion(pr, v).r; }, xx);
    CHECK(oracle::max_column_rel_error(oracle::from_point(mesh_distortion(pr, xx).jacobian), fd, 1e-8) <= 1e-6);
  }
}

TEST_CASE("elasticity stiffness examples") {
  const auto two = make_problem(2, 1, 1);
  const oracle::Mat want{{4, -4, 0}, {-4, 8, -4}, {0, -4, 4}};
  CHECK(oracle::rel_diff(oracle::from_point(elasticity_D(two)), want) < 1e-15);
  for (std::size_t q : {1, 2}) {
    const auto pr = make_problem(5, 1, q, 0.2, 7);
    const auto d = elasticity_D(pr);
    const auto dd = oracle::from_point(d);
    CHECK(dd == oracle::transpose(dd));
    CHECK(inf_norm(d.matvec(std::vector<double>(pr.n_x(), 1.0))) < 1e-10);
  }
}

TEST_CASE("objective and gradient") {
  const auto prob = make_problem(8, 1, 1);
  const auto st = tracked_exact_state(prob);
  // With kappa > 0 the moved node adds kappa^2/2 ||Rmsh||^2, so the optimum is checked at kappa = 0.
  const auto ov = objective_and_gradient(prob, st.u, st.y, 0.0);
  CHECK(ov.f <= 1e-24);
  CHECK(inf_norm(ov.g) <= 1e-10);

  const auto rs = random_state(prob, 3);
  const auto o0 = objective_and_gradient(prob, rs.u, rs.y, 0.0);
  CHECK(o0.f == o0.f_err);
  for (std::size_t q : {1, 2}) {
    const auto pr = make_problem(5, 2, q, 0.1, 1);
    const auto s = random_state(pr, 9 + q);
    const double kappa = 0.3;
    std::vector<double> z = s.u;
    z.insert(z.end(), s.y.begin(), s.y.end());
    const std::size_t nu = s.u.size();
    auto f = [&](const std::vector<double>& zz) {
      const std::vector<double> u(zz.begin(), zz.begin() + static_cast<std::ptrdiff_t>(nu));
      const std::vector<double> y(zz.begin() + static_cast<std::ptrdiff_t>(nu), zz.end());
      return std::vector<double>{objective_and_gradient(pr, u, y, kappa).f};
    };
    const auto fd = oracle::fd_jacobian(f, z);
    const auto g = objective_and_gradient(pr, s.u, s.y, kappa).g;
    CHECK(oracle::rel_diff(g, fd[0]) <= 1e-6);
  }
}

TEST_CASE("L2 projection reproduces polynomials of the solution degree") {
  const auto prob = make_problem(4, 2, 1, 0.2, 5);
  const auto u = l2_project(prob, prob.reference_x, [](double x) { return 1.0 - 2.0 * x + 3.0 * x * x; });
  const LagrangeBasis b(2);
  for (std::size_t e = 0; e < 4; ++e) {
    const double xl = prob.reference_x[e], xr = prob.reference_x[e + 1];
    for (std::size_t i = 0; i < 3; ++i) {
      const double x = xl + 0.5 * (b.nodes()[i] + 1.0) * (xr - xl);
      CHECK(u[3 * e + i] == doctest::Approx(1.0 - 2.0 * x + 3.0 * x * x).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_kkt: large gamma limit, symmetry and right-hand side signs") {
  const auto prob = make_problem(6, 1, 2);
  DgState st = random_state(prob, 1);
  st.kappa = 1e-2;
  st.gamma = 1e6;
  const KktSystem sys = build_kkt(prob, st);
  const auto dphi = oracle::from_point(sys.factors.dphidy);
  const auto dterm =
      oracle::scale(oracle::matmul(oracle::matmul(oracle::transpose(dphi), oracle::from_point(sys.factors.d)), dphi), 1e6);
  CHECK(oracle::rel_diff(oracle::from_point(sys.byy), dterm) <= 1e-4);
  const auto a = oracle::from_dense(materialize_dense(KktOperator(sys)));
  CHECK(a == oracle::transpose(a));
  CHECK(oracle::rel_diff(a, fixture::dense_kkt(sys)) < 1e-12);

  // One p = 0 element: r = -0.4, R = (-0.205, -0.195), dR/du = (0, -1), so g = 0.195.
  const auto one = make_problem(1, 0, 1);
  DgState s1;
  s1.u = {0.5};
  s1.lambda = {0.0};
  const KktSystem k1 = build_kkt(one, s1);
  REQUIRE(k1.dimension() == 2);
  const auto b = k1.rhs();
  CHECK(std::fabs(b[0] + 0.195) < 1e-15);
  CHECK(std::fabs(b[1] - 0.4) < 1e-15);
}

TEST_CASE("SQP stops immediately at the tracked optimum") {
  const auto prob = make_problem(8, 1, 1);
  const auto st = tracked_exact_state(prob, 1e-7, 1e-2);
  const auto step = sqp_step(prob, st);
  CHECK(std::max(inf_norm(step.du), inf_norm(step.dy)) <= 1e-8);
  SqpConfig cfg;
  const auto res = run_sqp(prob, st, cfg);
  CHECK(res.converged);
  CHECK(res.states.size() == 1);
}

TEST_CASE("SQP converges to the tracked solution from the smoothed start") {
  const auto prob = make_problem(8, 1, 1);
  SqpConfig cfg;
  const auto res = run_sqp(prob, smoothed_initial_state(prob, 0.05, cfg.kappa, cfg.gamma), cfg);
  REQUIRE(res.converged);
  const auto& fin = res.states.back();
  const auto x = phi_map(prob, fin.y);
  double nearest = 1.0;
  for (double xi : x) nearest = std::min(nearest, std::fabs(xi - kShockLocation));
  CHECK(nearest <= 1e-6);
  CHECK(objective_and_gradient(prob, fin.u, fin.y, cfg.kappa).f_err <= 1e-10);
  CHECK(inf_norm(lagrangian_gradient(prob, fin)) <= 1e-8);
  for (std::size_t i = 1; i < res.merit.size(); ++i) CHECK(res.merit[i] < res.merit[i - 1]);
  for (std::size_t i = 1; i < res.states.size(); ++i) CHECK(res.states[i].k == i);
}

TEST_CASE("SQP halves the step when the full step would invert an element") {
  // Nodes squeezed around the shock under weak mesh regularization: the full
  // Newton step folds an element.
  const auto prob = make_problem(8, 1, 1);
  SqpConfig cfg;
  cfg.gamma = 1e-4;
  DgState st = smoothed_initial_state(prob, 0.05, cfg.kappa, cfg.gamma);
  st.y[3] = 0.58;
  st.y[4] = 0.62;
  const auto first = sqp_step(prob, st);
  std::vector<double> full = st.y;
  for (std::size_t i = 0; i < full.size(); ++i) full[i] += first.dy[i];
  CHECK_THROWS_AS(check_mesh(prob, phi_map(prob, full)), Error);
  cfg.max_iters = 1;
  const auto res = run_sqp(prob, st, cfg);
  REQUIRE(res.states.size() == 2);
  CHECK(res.states[1].alpha < 1.0);
  CHECK_NOTHROW(check_mesh(prob, phi_map(prob, res.states[1].y)));
}

TEST_CASE("SQP rejects invalid settings") {
  const auto prob = make_problem(4, 1, 1);
  const auto st = smoothed_initial_state(prob, 0.05, 0.0, 0.0);
  SqpConfig cfg;
  cfg.backtrack = 1.0;
  CHECK_THROWS_AS(run_sqp(prob, st, cfg), Error);
  cfg.backtrack = 0.5;
  cfg.min_step = 0.0;
  CHECK_THROWS_AS(run_sqp(prob, st, cfg), Error);
}

TEST_CASE("problem validation") {
  auto prob = make_problem(3, 1, 1);
  prob.q = 3;
  CHECK_THROWS_AS(prob.validate(), Error);
  CHECK_THROWS_AS(make_problem(0, 1, 1), Error);
  const auto j = make_problem(10, 1, 2, 0.3, 4);
  CHECK(j.reference_x.front() == 0.0);
  CHECK(j.reference_x.back() == 1.0);
  for (std::size_t i = 1; i < j.reference_x.size(); ++i) CHECK(j.reference_x[i] > j.reference_x[i - 1]);
}
