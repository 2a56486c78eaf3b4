#include <cmath>
#include <vector>

#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "kktp/bench.hpp"
#include "kktp/error.hpp"
#include "kktp/kkt.hpp"
#include "kktp/rng.hpp"
#include "kktp/shock1d.hpp"

using namespace kktp;

namespace {

// Factors with identity mesh map and empty DG mesh sensitivities: n_u unknowns in
// scalar blocks, n_x = n_y mesh unknowns.
KktFactors tiny_factors(std::size_t nu, std::size_t nx) {
  KktFactors f;
  BlockCsrBuilder ju(std::vector<std::size_t>(nu, 1), std::vector<std::size_t>(nu, 1));
  for (std::size_t i = 0; i < nu; ++i) ju.add(i, i, DenseMatrix::identity(1));
  f.ju = ju.build();
  f.drdu = BlockCsrBuilder(std::vector<std::size_t>(nu, 1), std::vector<std::size_t>(nu, 1)).build();
  f.drdx = BlockCsrBuilder(std::vector<std::size_t>(nu, 1), std::vector<std::size_t>(nx, 1)).build();
  f.drmshdx = PointCsrMatrix(1, nx);
  f.dphidy = PointCsrMatrix::identity(nx);
  f.d = PointCsrMatrix(nx, nx);
  f.jy = PointCsrMatrix(nu, nx);
  return f;
}

oracle::Mat dense_byy(const KktFactors& f) {
  using namespace oracle;
  const Mat drdx = from_block(f.drdx), msh = from_point(f.drmshdx), dphi = from_point(f.dphidy);
  Mat bxx = matmul(transpose(drdx), drdx);
  bxx = add(bxx, matmul(transpose(msh), msh), f.kappa * f.kappa);
  bxx = add(bxx, from_point(f.d), f.gamma);
  return matmul(matmul(transpose(dphi), bxx), dphi);
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("assemble_byy examples") {
  KktFactors f = tiny_factors(2, 3);
  CHECK(oracle::frob(oracle::from_point(assemble_byy(f))) == 0.0);

  f.gamma = 1.0;
  f.d = assemble_point_csr(3, 3, std::vector<Triplet>{{0, 0, 2}, {0, 1, -1}, {1, 0, -1}, {1, 1, 2}, {2, 2, 5}});
  CHECK(oracle::from_point(assemble_byy(f)) == oracle::from_point(f.d));

  f.d = PointCsrMatrix(2, 2);
  CHECK_THROWS_AS(assemble_byy(f), Error);
}

TEST_CASE("assemble_byy matches the dense triple product and is exactly symmetric") {
  for (std::size_t q : {1, 2})
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const KktFactors f = fixture::random_factors(5, 2, q, seed, false, 0.3, 0.07);
      const auto byy = oracle::from_point(assemble_byy(f));
      CHECK(oracle::rel_diff(byy, dense_byy(f)) < 1e-12);
      CHECK(byy == oracle::transpose(byy));
    }
}

TEST_CASE("KKT matvec matches the dense block assembly") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const KktSystem sys = fixture::random_system(6, 1 + seed % 2, 1 + seed / 2, seed);
    const KktOperator op(sys);
    const auto a = fixture::dense_kkt(sys);
    Rng rng(seed + 50);
    for (int t = 0; t < 5; ++t) {
      const auto v = rng.vector(op.dimension());
      CHECK(oracle::rel_diff(op.apply(v), oracle::matvec(a, v)) < 1e-12);
    }
  }
}

TEST_CASE("KKT matvec trivial cases") {
  KktFactors f = tiny_factors(2, 2);
  f.gamma = 1.0;
  f.d = PointCsrMatrix::identity(2);
  f.ju = BlockCsrBuilder({1, 1}, {1, 1}).build();
  const KktSystem sys = make_kkt_system(f, std::vector<double>(4), std::vector<double>(2));
  const KktOperator op(sys);
  const std::vector<double> e{0, 0, 1, 0, 0, 0};
  CHECK(op.apply(e) == e);
  const std::vector<double> z(6, 0.0);
  CHECK(op.apply(z) == z);
  std::vector<double> out(6);
  CHECK_THROWS_AS(op.apply(std::vector<double>(5), out), Error);
}

TEST_CASE("materialize_dense agrees with the operator and is exactly symmetric") {
  const KktSystem sys = fixture::random_system(5, 1, 2, 9);
  const KktOperator op(sys);
  const auto a = oracle::from_dense(materialize_dense(op));
  CHECK(a == oracle::transpose(a));
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const auto v = rng.vector(op.dimension());
    CHECK(oracle::rel_diff(oracle::matvec(a, v), op.apply(v)) < 1e-12);
  }
  KktFactors zf = tiny_factors(2, 2);
  zf.ju = BlockCsrBuilder({1, 1}, {1, 1}).build();
  const KktSystem zs = make_kkt_system(zf, std::vector<double>(4), std::vector<double>(2));
  CHECK(materialize_dense(KktOperator(zs)).max_abs() == 0.0);
}

TEST_CASE("materialize_dense enforces the size cap") {
  const KktSystem sys = fixture::random_system(4, 1, 1, 1);
  try {
    materialize_dense(KktOperator(sys), 10);
    FAIL("expected SizeCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeCapExceeded);
  }
}

TEST_CASE("property: operator symmetry, B_uu semidefiniteness and linearity") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const KktSystem sys = fixture::random_system(7, 2, 1, 100 + seed);
    const KktOperator op(sys);
    Rng rng(seed);
    const auto u = rng.vector(op.dimension()), v = rng.vector(op.dimension());
    const auto au = op.apply(u), av = op.apply(v);
    const double scale = oracle::norm(au) * oracle::norm(v) + oracle::norm(av) * oracle::norm(u);
    CHECK(std::fabs(dotv(u, av) - dotv(au, v)) <= 1e-10 * scale);

    const std::size_t nu = sys.n_u();
    std::vector<double> wu(op.dimension(), 0.0);
    for (std::size_t i = 0; i < nu; ++i) wu[i] = rng.uniform(-1, 1);
    const auto aw = op.apply(wu);
    double quad = 0;
    for (std::size_t i = 0; i < nu; ++i) quad += wu[i] * aw[i];
    CHECK(quad >= -1e-10);

    std::vector<double> comb(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) comb[i] = 3.0 * u[i] - 2.0 * v[i];
    std::vector<double> want(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) want[i] = 3.0 * au[i] - 2.0 * av[i];
    CHECK(oracle::rel_diff(op.apply(comb), want) < 1e-10);
  }
}

TEST_CASE("property: elasticity D is symmetric positive semidefinite") {
  for (std::size_t q : {1, 2}) {
    const auto prob = shock1d::make_problem(6, 1, q, 0.2, 3);
    const auto d = oracle::from_point(shock1d::elasticity_D(prob));
    CHECK(d == oracle::transpose(d));
    Rng rng(q);
    for (int t = 0; t < 10; ++t) {
      const auto v = rng.vector(d.size());
      CHECK(dotv(v, oracle::matvec(d, v)) >= -1e-10);
    }
  }
}

TEST_CASE("property: Rayleigh quotients of B_yy are monotone in gamma") {
  KktFactors f = fixture::random_factors(6, 1, 2, 5);
  Rng rng(6);
  std::vector<std::vector<double>> probes;
  for (int t = 0; t < 8; ++t) probes.push_back(rng.vector(f.n_y()));
  std::vector<double> prev(probes.size(), -1e300);
  for (double gamma : {0.0, 1e-4, 1e-2, 1.0, 100.0}) {
    f.gamma = gamma;
    const auto byy = assemble_byy(f);
    for (std::size_t t = 0; t < probes.size(); ++t) {
      const double rq = dotv(probes[t], byy.matvec(probes[t])) / dotv(probes[t], probes[t]);
      CHECK(rq >= prev[t] - 1e-12 * std::fabs(rq));
      prev[t] = rq;
    }
  }
}

TEST_CASE("block sparsity growth: 1D interior, single element and 5-point stencil") {
  const auto prob = shock1d::make_problem(8, 2, 1);
  const auto st = shock1d::tracked_exact_state(prob);
  const auto jac = shock1d::dg_jacobians(prob, st.u, shock1d::phi_map(prob, st.y));
  const auto r1 = count_block_sparsity(jac.ju, symbolic_gram_pattern(jac.drdu.pattern()));
  CHECK(r1.m1 == 3.0);
  CHECK(r1.m2 == 5.0);
  CHECK(r1.ratio == doctest::Approx(5.0 / 3.0).epsilon(1e-15));

  const auto one = shock1d::make_problem(1, 1, 1);
  const auto s1 = shock1d::smoothed_initial_state(one, 0.05, 0.0, 0.0);
  const auto j1 = shock1d::dg_jacobians(one, s1.u, shock1d::phi_map(one, s1.y));
  CHECK(count_block_sparsity(j1.ju, symbolic_gram_pattern(j1.drdu.pattern())).ratio == 1.0);

  const auto a = bench::generate_stencil_system(6, 2, 1, 5);
  const auto r2 = count_block_sparsity(a, symbolic_gram_pattern(a.pattern()));
  CHECK(r2.m1 == 5.0);
  CHECK(r2.m2 == 13.0);
  CHECK(r2.ratio == doctest::Approx(2.6).epsilon(1e-15));
}

TEST_CASE("symbolic gram pattern matches the numeric product pattern") {
  Rng rng(14);
  const auto a = fixture::random_rect(rng, {2, 1, 3, 2}, {1, 2, 2}, 0.5);
  const auto g = symbolic_gram_pattern(a.pattern());
  const auto dense = oracle::matmul(oracle::transpose(oracle::from_block(a)), oracle::from_block(a));
  // Every nonzero of the product falls inside the symbolic pattern.
  const auto offs = block_offsets(a.pattern().col_block_sizes);
  for (std::size_t I = 0; I < 3; ++I)
    for (std::size_t J = 0; J < 3; ++J) {
      bool any = false;
      for (std::size_t i = offs[I]; i < offs[I + 1]; ++i)
        for (std::size_t j = offs[J]; j < offs[J + 1]; ++j) any = any || dense[i][j] != 0.0;
      if (any) CHECK(g.find(I, J).has_value());
    }
}

TEST_CASE("without_uu_coupling zeroes B_uu and B_uy only") {
  const KktSystem sys = fixture::random_system(5, 1, 1, 21);
  const KktSystem z = without_uu_coupling(sys);
  const auto a = fixture::dense_kkt(z);
  const std::size_t nu = sys.n_u(), ny = sys.n_y();
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nu + ny; ++j) CHECK(a[i][j] == 0.0);
  CHECK(oracle::from_point(z.byy) == oracle::from_point(sys.byy));
  CHECK(z.g == sys.g);
}

TEST_CASE("right-hand side is -(g, r)") {
  const KktSystem sys = fixture::random_system(3, 1, 1, 2);
  const auto b = sys.rhs();
  REQUIRE(b.size() == sys.dimension());
  for (std::size_t i = 0; i < sys.g.size(); ++i) CHECK(b[i] == -sys.g[i]);
  for (std::size_t i = 0; i < sys.r.size(); ++i) CHECK(b[sys.g.size() + i] == -sys.r[i]);
}

TEST_CASE("make_kkt_system rejects inconsistent inputs") {
  KktFactors f = fixture::random_factors(3, 1, 1, 1);
  CHECK_THROWS_AS(make_kkt_system(f, std::vector<double>(2), std::vector<double>(f.n_u())), Error);
  f.kappa = -1.0;
  CHECK_THROWS_AS(make_kkt_system(f, std::vector<double>(f.n_u() + f.n_y()), std::vector<double>(f.n_u())), Error);
}
