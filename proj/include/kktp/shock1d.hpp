#pragma once

// Steady 1D Burgers with source, (u^2/2)' = u on (0, 1), discretized by DG
// on a mesh whose interior node positions are optimization variables.
//
// Mesh coefficients x are numbered left to right: element e owns nodes
// q*e .. q*e + q. The unconstrained variables y are x without its first and
// last entries (the pinned domain endpoints). Solution coefficients u are
// nodal values on equispaced points of [-1, 1], element by element.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kktp/block_csr.hpp"
#include "kktp/dense.hpp"
#include "kktp/kkt.hpp"
#include "kktp/point_csr.hpp"

namespace kktp::shock1d {

// ---- basis and quadrature -------------------------------------------------

struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (exact to degree 2n - 1).
GaussRule gauss_legendre(std::size_t n);

/// Lagrange basis of the given degree on equispaced nodes of [-1, 1]
/// (the single node 0 for degree 0).
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::size_t degree);
  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  void eval(double xi, std::span<double> values) const;
  void eval_derivative(double xi, std::span<double> derivs) const;
  std::vector<double> eval(double xi) const;
  std::vector<double> eval_derivative(double xi) const;

 private:
  std::size_t degree_;
  std::vector<double> nodes_;
  std::vector<double> denom_;
};

// ---- problem definition ---------------------------------------------------

enum class FluxKind { Burgers, Linear };

struct ShockTrackProblem1d {
  std::size_t n_elem = 8;
  std::size_t p = 1;
  std::size_t q = 1;
  FluxKind flux = FluxKind::Burgers;
  bool source = true;
  double bc_left = 0.4;
  double bc_right = -0.6;
  /// Reference mesh coefficients (length q*n_elem + 1), spanning [0, 1].
  std::vector<double> reference_x;

  std::size_t p_enriched() const noexcept { return p + 1; }
  std::size_t n_x() const noexcept { return q * n_elem + 1; }
  std::size_t n_y() const noexcept { return n_x() - 2; }
  std::size_t n_u() const noexcept { return n_elem * (p + 1); }
  std::size_t n_u_enriched() const noexcept { return n_elem * (p + 2); }
  /// Gauss points: exact for polynomial integrands of degree max(3p, 2p + q + 2).
  std::size_t quadrature_points() const noexcept;
  double reference_length(std::size_t e) const { return reference_x[q * (e + 1)] - reference_x[q * e]; }
  Layout1d layout() const noexcept { return {n_elem, p, q}; }

  /// Throws InvalidArgument for inconsistent fields.
  void validate() const;
};

/// Uniform reference mesh on [0, 1]. With jitter > 0, element endpoints are
/// displaced by up to jitter * h using the seed; q = 2 midpoints stay centred.
ShockTrackProblem1d make_problem(std::size_t n_elem, std::size_t p, std::size_t q, double jitter = 0.0,
                                 std::uint64_t seed = 0);

/// u*(x) = x + 0.4 left of 0.6, x - 1.6 right of it.
double exact_solution(double x);
inline constexpr double kShockLocation = 0.6;

double flux(FluxKind kind, double u);
double flux_derivative(FluxKind kind, double u);

struct NumericalFlux {
  double value;
  double d_left;
  double d_right;
};
/// Exact Riemann (Godunov) flux between a left state and a right state.
NumericalFlux godunov_flux(FluxKind kind, double ul, double ur);

// ---- mesh parameterization -------------------------------------------------

/// Inserts the pinned endpoints 0 and 1 around y.
std::vector<double> phi_map(const ShockTrackProblem1d& prob, std::span<const double> y);
/// 0/1 selection matrix dx/dy, N_x x N_y.
PointCsrMatrix dphi_dy(const ShockTrackProblem1d& prob);
/// Interior coefficients of a mesh vector.
std::vector<double> free_coordinates(std::span<const double> x);

/// Throws InvertedElement (index = element) unless dx/dxi > 0 on every element.
void check_mesh(const ShockTrackProblem1d& prob, std::span<const double> x);

// ---- DG residual and derivatives -----------------------------------------

/// Residual tested with degree test_degree (p gives r, p + 1 gives R).
std::vector<double> dg_residual(const ShockTrackProblem1d& prob, std::span<const double> u, std::span<const double> x,
                                std::size_t test_degree);

struct ResidualDerivatives {
  BlockCsrMatrix du;  // block tridiagonal, (test_degree+1) x (p+1) blocks
  BlockCsrMatrix dx;  // element rows, unit mesh-coefficient columns
};
ResidualDerivatives dg_derivatives(const ShockTrackProblem1d& prob, std::span<const double> u,
                                   std::span<const double> x, std::size_t test_degree);

struct DgJacobians {
  BlockCsrMatrix ju;    // dr/du
  BlockCsrMatrix drdu;  // dR/du
  BlockCsrMatrix drdx_enriched;  // dR/dx
  BlockCsrMatrix drdx;  // dr/dx
};
DgJacobians dg_jacobians(const ShockTrackProblem1d& prob, std::span<const double> u, std::span<const double> x);

struct MeshDistortion {
  std::vector<double> r;    // per element h/h0 + h0/h - 2
  PointCsrMatrix jacobian;  // n_elem x N_x
};
MeshDistortion mesh_distortion(const ShockTrackProblem1d& prob, std::span<const double> x);

/// Continuous FEM stiffness on the reference mesh with modulus 1/h0, N_x x N_x.
PointCsrMatrix elasticity_D(const ShockTrackProblem1d& prob);

// ---- objective, KKT system and SQP ----------------------------------------

struct ObjectiveValue {
  double f = 0.0;      // f_err + kappa^2/2 ||Rmsh||^2
  double f_err = 0.0;  // 1/2 ||R||^2
  std::vector<double> g;  // (df/du, df/dy)
};
ObjectiveValue objective_and_gradient(const ShockTrackProblem1d& prob, std::span<const double> u,
                                      std::span<const double> y, double kappa);

struct DgState {
  std::vector<double> u;
  std::vector<double> y;
  std::vector<double> lambda;
  std::size_t k = 0;
  double alpha = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
};

KktSystem build_kkt(const ShockTrackProblem1d& prob, const DgState& state);

/// Elementwise L2 projection of a function onto the degree-p nodal space.
std::vector<double> l2_project(const ShockTrackProblem1d& prob, std::span<const double> x,
                               const std::function<double(double)>& fn);
std::vector<double> l2_project_smoothed_exact(const ShockTrackProblem1d& prob, std::span<const double> x,
                                              double width);

/// Reference mesh with its node nearest the shock moved onto it, and u equal
/// to the nodal interpolant of u* (branch chosen by the element midpoint).
DgState tracked_exact_state(const ShockTrackProblem1d& prob, double kappa = 0.0, double gamma = 0.0);

/// Reference mesh and the L2 projection of a tanh-smoothed u*.
DgState smoothed_initial_state(const ShockTrackProblem1d& prob, double width, double kappa, double gamma);

struct SqpConfig {
  std::size_t max_iters = 100;
  /// l1 merit penalty; <= 0 selects 10 * ||eta_0||_inf at the first step.
  double mu = 0.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  double min_step = 0x1.0p-20;
  double step_tol = 1e-10;
  double kappa = 1e-7;
  double gamma = 1e-2;
  std::size_t dense_cap = kDefaultDenseCap;
};

struct SqpStep {
  std::vector<double> du;
  std::vector<double> dy;
  std::vector<double> eta;  // multiplier of the linearized constraint
};

/// Dense direct solve of the saddle-point system at the state.
SqpStep sqp_step(const ShockTrackProblem1d& prob, const DgState& state, std::size_t dense_cap = kDefaultDenseCap);

struct SqpResult {
  std::vector<DgState> states;  // states[0] is the initial state
  bool converged = false;
  double mu = 0.0;
  std::vector<double> merit;  // merit value at each recorded state
};

/// Throws LineSearchFailure when the step length falls below min_step.
SqpResult run_sqp(const ShockTrackProblem1d& prob, DgState initial, const SqpConfig& cfg);

/// KKT stationarity residual g - [Ju Jy]^T lambda.
std::vector<double> lagrangian_gradient(const ShockTrackProblem1d& prob, const DgState& state);

}  // namespace kktp::shock1d
