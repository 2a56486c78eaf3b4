#include <algorithm>
#include <cmath>
#include <string>

#include "kktp/error.hpp"
#include "kktp/rng.hpp"
#include "kktp/shock1d.hpp"

namespace kktp::shock1d {

std::size_t ShockTrackProblem1d::quadrature_points() const noexcept {
  const std::size_t degree = std::max(3 * p, 2 * p + q + 2);
  return degree / 2 + 1;
}

void ShockTrackProblem1d::validate() const {
  if (n_elem == 0) throw_error(ErrorCode::InvalidArgument, "n_elem must be positive");
  if (q != 1 && q != 2) throw_error(ErrorCode::InvalidArgument, "mesh degree q must be 1 or 2");
  require_same_size(reference_x.size(), n_x(), "reference mesh length");
  for (std::size_t e = 0; e < n_elem; ++e)
    if (!(reference_length(e) > 0.0))
      throw_error(ErrorCode::InvalidArgument, "reference element " + std::to_string(e) + " has no positive length", e);
  for (std::size_t i = 1; i < reference_x.size(); ++i)
    if (!(reference_x[i] > reference_x[i - 1]))
      throw_error(ErrorCode::InvalidArgument, "reference nodes must be strictly increasing", i);
}

ShockTrackProblem1d make_problem(std::size_t n_elem, std::size_t p, std::size_t q, double jitter, std::uint64_t seed) {
  ShockTrackProblem1d prob;
  prob.n_elem = n_elem;
  prob.p = p;
  prob.q = q;
  if (n_elem == 0 || (q != 1 && q != 2)) prob.validate();
  if (!(jitter >= 0.0 && jitter < 0.5)) throw_error(ErrorCode::InvalidArgument, "jitter must lie in [0, 0.5)");
  const double h = 1.0 / static_cast<double>(n_elem);
  std::vector<double> ends(n_elem + 1);
  Rng rng(seed);
  for (std::size_t e = 0; e <= n_elem; ++e) {
    ends[e] = static_cast<double>(e) * h;
    if (e > 0 && e < n_elem && jitter > 0.0) ends[e] += jitter * h * rng.uniform(-1.0, 1.0);
  }
  ends[n_elem] = 1.0;
  prob.reference_x.resize(prob.n_x());
  for (std::size_t e = 0; e < n_elem; ++e)
    for (std::size_t a = 0; a <= q; ++a) {
      const double s = static_cast<double>(a) / static_cast<double>(q);
      prob.reference_x[q * e + a] = (1.0 - s) * ends[e] + s * ends[e + 1];
    }
  prob.reference_x.front() = 0.0;
  prob.reference_x.back() = 1.0;
  prob.validate();
  return prob;
}

double exact_solution(double x) { return x < kShockLocation ? x + 0.4 : x - 1.6; }

double flux(FluxKind kind, double u) { return kind == FluxKind::Burgers ? 0.5 * u * u : u; }
double flux_derivative(FluxKind kind, double u) { return kind == FluxKind::Burgers ? u : 1.0; }

NumericalFlux godunov_flux(FluxKind kind, double ul, double ur) {
  if (kind == FluxKind::Linear) return {ul, 1.0, 0.0};  // unit speed: upwind is the left state
  if (ul == ur) {
    // Continuous state: the derivative follows the characteristic direction.
    if (flux_derivative(kind, ul) >= 0.0) return {flux(kind, ul), flux_derivative(kind, ul), 0.0};
    return {flux(kind, ur), 0.0, flux_derivative(kind, ur)};
  }
  if (ul > ur) {
    const double fl = flux(kind, ul), fr = flux(kind, ur);
    if (fl >= fr) return {fl, flux_derivative(kind, ul), 0.0};
    return {fr, 0.0, flux_derivative(kind, ur)};
  }
  if (ul >= 0.0) return {flux(kind, ul), flux_derivative(kind, ul), 0.0};
  if (ur <= 0.0) return {flux(kind, ur), 0.0, flux_derivative(kind, ur)};
  return {0.0, 0.0, 0.0};  // transonic rarefaction: sonic state u = 0
}

std::vector<double> phi_map(const ShockTrackProblem1d& prob, std::span<const double> y) {
  require_same_size(y.size(), prob.n_y(), "phi_map input");
  std::vector<double> x;
  x.reserve(prob.n_x());
  x.push_back(prob.reference_x.front());
  x.insert(x.end(), y.begin(), y.end());
  x.push_back(prob.reference_x.back());
  return x;
}

PointCsrMatrix dphi_dy(const ShockTrackProblem1d& prob) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < prob.n_y(); ++j) t.push_back({j + 1, j, 1.0});
  return assemble_point_csr(prob.n_x(), prob.n_y(), t);
}

std::vector<double> free_coordinates(std::span<const double> x) {
  if (x.size() < 2) throw_error(ErrorCode::InvalidArgument, "mesh vector needs two endpoints");
  return {x.begin() + 1, x.end() - 1};
}

void check_mesh(const ShockTrackProblem1d& prob, std::span<const double> x) {
  require_same_size(x.size(), prob.n_x(), "mesh coefficients");
  const LagrangeBasis geo(prob.q);
  const std::vector<double> dl = geo.eval_derivative(-1.0), dr = geo.eval_derivative(1.0);
  for (std::size_t e = 0; e < prob.n_elem; ++e) {
    double jl = 0.0, jr = 0.0;
    for (std::size_t a = 0; a <= prob.q; ++a) {
      jl += dl[a] * x[prob.q * e + a];
      jr += dr[a] * x[prob.q * e + a];
    }
    // dx/dxi is affine in xi for q <= 2, so checking both ends covers the element.
    if (!(jl > 0.0) || !(jr > 0.0) || !std::isfinite(jl) || !std::isfinite(jr))
      throw_error(ErrorCode::InvertedElement, "element " + std::to_string(e) + " is inverted", e);
  }
}

MeshDistortion mesh_distortion(const ShockTrackProblem1d& prob, std::span<const double> x) {
  check_mesh(prob, x);
  MeshDistortion m;
  m.r.resize(prob.n_elem);
  std::vector<Triplet> t;
  for (std::size_t e = 0; e < prob.n_elem; ++e) {
    const std::size_t a = prob.q * e, b = prob.q * (e + 1);
    const double h = x[b] - x[a], h0 = prob.reference_length(e);
    m.r[e] = h / h0 + h0 / h - 2.0;
    const double dh = 1.0 / h0 - h0 / (h * h);
    t.push_back({e, a, -dh});
    t.push_back({e, b, dh});
  }
  m.jacobian = assemble_point_csr(prob.n_elem, prob.n_x(), t);
  return m;
}

PointCsrMatrix elasticity_D(const ShockTrackProblem1d& prob) {
  prob.validate();
  std::vector<Triplet> t;
  for (std::size_t e = 0; e < prob.n_elem; ++e) {
    const double h0 = prob.reference_length(e);
    const double modulus = 1.0 / h0;
    const std::size_t base = prob.q * e;
    if (prob.q == 1) {
      const double s = modulus / h0;
      t.push_back({base, base, s});
      t.push_back({base, base + 1, -s});
      t.push_back({base + 1, base, -s});
      t.push_back({base + 1, base + 1, s});
    } else {
      static constexpr double k[3][3] = {{7, -8, 1}, {-8, 16, -8}, {1, -8, 7}};
      const double s = modulus / (3.0 * h0);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) t.push_back({base + i, base + j, s * k[i][j]});
    }
  }
  return assemble_point_csr(prob.n_x(), prob.n_x(), t);
}

std::vector<double> l2_project(const ShockTrackProblem1d& prob, std::span<const double> x,
                               const std::function<double(double)>& fn) {
  check_mesh(prob, x);
  const LagrangeBasis sol(prob.p), geo(prob.q);
  const GaussRule rule = gauss_legendre(24);
  const std::size_t np = sol.size();
  std::vector<double> u(prob.n_u());
  for (std::size_t e = 0; e < prob.n_elem; ++e) {
    DenseMatrix mass(np, np);
    std::vector<double> rhs(np, 0.0);
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      const double xi = rule.points[g];
      const auto phi = sol.eval(xi);
      const auto gn = geo.eval(xi), gd = geo.eval_derivative(xi);
      double xq = 0.0, jac = 0.0;
      for (std::size_t a = 0; a <= prob.q; ++a) {
        xq += gn[a] * x[prob.q * e + a];
        jac += gd[a] * x[prob.q * e + a];
      }
      const double w = rule.weights[g] * jac;
      const double fv = fn(xq);
      for (std::size_t i = 0; i < np; ++i) {
        rhs[i] += w * phi[i] * fv;
        for (std::size_t j = 0; j < np; ++j) mass(i, j) += w * phi[i] * phi[j];
      }
    }
    const std::vector<double> c = dense_solve(mass, rhs);
    std::copy(c.begin(), c.end(), u.begin() + static_cast<std::ptrdiff_t>(e * np));
  }
  return u;
}

std::vector<double> l2_project_smoothed_exact(const ShockTrackProblem1d& prob, std::span<const double> x,
                                              double width) {
  if (!(width > 0.0)) throw_error(ErrorCode::InvalidArgument, "smoothing width must be positive");
  return l2_project(prob, x, [width](double xx) {
    const double heaviside = 0.5 * (1.0 + std::tanh((xx - kShockLocation) / width));
    return xx + 0.4 - 2.0 * heaviside;
  });
}

DgState tracked_exact_state(const ShockTrackProblem1d& prob, double kappa, double gamma) {
  prob.validate();
  if (prob.n_elem < 2) throw_error(ErrorCode::InvalidArgument, "tracking the shock needs an interior node");
  std::vector<double> x = prob.reference_x;
  const std::size_t q = prob.q;
  std::size_t best = 1;
  for (std::size_t e = 1; e < prob.n_elem; ++e)
    if (std::fabs(x[q * e] - kShockLocation) < std::fabs(x[q * best] - kShockLocation)) best = e;
  x[q * best] = kShockLocation;
  if (q == 2) {
    x[q * best - 1] = 0.5 * (x[q * best - 2] + x[q * best]);
    x[q * best + 1] = 0.5 * (x[q * best] + x[q * best + 2]);
  }
  check_mesh(prob, x);

  const LagrangeBasis sol(prob.p), geo(prob.q);
  DgState s;
  s.u.resize(prob.n_u());
  for (std::size_t e = 0; e < prob.n_elem; ++e) {
    const double mid = 0.5 * (x[q * e] + x[q * (e + 1)]);
    const bool left = mid < kShockLocation;
    for (std::size_t i = 0; i < sol.size(); ++i) {
      const auto gn = geo.eval(sol.nodes()[i]);
      double xn = 0.0;
      for (std::size_t a = 0; a <= q; ++a) xn += gn[a] * x[q * e + a];
      s.u[e * sol.size() + i] = left ? xn + 0.4 : xn - 1.6;
    }
  }
  s.y = free_coordinates(x);
  s.lambda.assign(prob.n_u(), 0.0);
  s.kappa = kappa;
  s.gamma = gamma;
  return s;
}

DgState smoothed_initial_state(const ShockTrackProblem1d& prob, double width, double kappa, double gamma) {
  prob.validate();
  DgState s;
  s.u = l2_project_smoothed_exact(prob, prob.reference_x, width);
  s.y = free_coordinates(prob.reference_x);
  s.lambda.assign(prob.n_u(), 0.0);
  s.kappa = kappa;
  s.gamma = gamma;
  return s;
}

}  // namespace kktp::shock1d
