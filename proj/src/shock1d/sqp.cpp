#include <algorithm>
#include <cmath>
#include <string>

#include "kktp/error.hpp"
#include "kktp/shock1d.hpp"

namespace kktp::shock1d {
namespace {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

struct MeritEval {
  double merit;
  double f;
  double r_l1;
};

MeritEval evaluate_merit(const ShockTrackProblem1d& prob, std::span<const double> u, std::span<const double> y,
                         double kappa, double mu) {
  const ObjectiveValue obj = objective_and_gradient(prob, u, y, kappa);
  const double rl1 = l1_norm(dg_residual(prob, u, phi_map(prob, y), prob.p));
  return {obj.f + mu * rl1, obj.f, rl1};
}

}  // namespace

SqpStep sqp_step(const ShockTrackProblem1d& prob, const DgState& state, std::size_t dense_cap) {
  const KktSystem sys = build_kkt(prob, state);
  const KktOperator op(sys);
  const DenseMatrix a = materialize_dense(op, dense_cap);
  const std::vector<double> sol = dense_solve(a, sys.rhs());
  const std::size_t nu = sys.n_u(), ny = sys.n_y();
  SqpStep step;
  step.du.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(nu));
  step.dy.assign(sol.begin() + static_cast<std::ptrdiff_t>(nu), sol.begin() + static_cast<std::ptrdiff_t>(nu + ny));
  step.eta.assign(sol.begin() + static_cast<std::ptrdiff_t>(nu + ny), sol.end());
  return step;
}

SqpResult run_sqp(const ShockTrackProblem1d& prob, DgState initial, const SqpConfig& cfg) {
  prob.validate();
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0))
    throw_error(ErrorCode::InvalidArgument, "backtracking factor must lie in (0, 1)");
  if (!(cfg.min_step > 0.0)) throw_error(ErrorCode::InvalidArgument, "minimum step must be positive");
  initial.kappa = cfg.kappa;
  initial.gamma = cfg.gamma;
  if (initial.lambda.size() != prob.n_u()) initial.lambda.assign(prob.n_u(), 0.0);
  check_mesh(prob, phi_map(prob, initial.y));

  SqpResult res;
  res.mu = cfg.mu;
  res.states.push_back(initial);

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    DgState& cur = res.states.back();
    const SqpStep step = sqp_step(prob, cur, cfg.dense_cap);
    if (res.mu <= 0.0) {
      const double eta_max = inf_norm(step.eta);
      res.mu = eta_max > 0.0 ? 10.0 * eta_max : 1.0;
    }
    if (res.merit.empty()) res.merit.push_back(evaluate_merit(prob, cur.u, cur.y, cfg.kappa, res.mu).merit);

    const double step_norm = std::max(inf_norm(step.du), inf_norm(step.dy));
    if (step_norm <= cfg.step_tol) {
      for (std::size_t i = 0; i < cur.lambda.size(); ++i) cur.lambda[i] = -step.eta[i];
      res.converged = true;
      return res;
    }

    const ObjectiveValue obj = objective_and_gradient(prob, cur.u, cur.y, cfg.kappa);
    const MeritEval here = evaluate_merit(prob, cur.u, cur.y, cfg.kappa, res.mu);
    double gdz = 0.0;
    for (std::size_t i = 0; i < step.du.size(); ++i) gdz += obj.g[i] * step.du[i];
    for (std::size_t i = 0; i < step.dy.size(); ++i) gdz += obj.g[step.du.size() + i] * step.dy[i];
    const double slope = gdz - res.mu * here.r_l1;

    DgState trial = cur;
    double alpha = 1.0;
    while (true) {
      if (alpha < cfg.min_step)
        throw_error(ErrorCode::LineSearchFailure,
                    "line search step fell below the minimum at SQP iteration " + std::to_string(it), it);
      for (std::size_t i = 0; i < trial.u.size(); ++i) trial.u[i] = cur.u[i] + alpha * step.du[i];
      for (std::size_t i = 0; i < trial.y.size(); ++i) trial.y[i] = cur.y[i] + alpha * step.dy[i];
      MeritEval m{};
      try {
        m = evaluate_merit(prob, trial.u, trial.y, cfg.kappa, res.mu);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvertedElement) throw;
        alpha *= cfg.backtrack;
        continue;
      }
      const bool ok = slope < 0.0 ? m.merit <= here.merit + cfg.armijo * alpha * slope : m.merit < here.merit;
      if (ok && std::isfinite(m.merit)) {
        trial.k = cur.k + 1;
        trial.alpha = alpha;
        for (std::size_t i = 0; i < trial.lambda.size(); ++i) trial.lambda[i] = -step.eta[i];
        res.merit.push_back(m.merit);
        break;
      }
      alpha *= cfg.backtrack;
    }
    res.states.push_back(std::move(trial));
  }
  return res;
}

}  // namespace kktp::shock1d
