#include <cstdio>

#include "kktp/bench.hpp"
#include "kktp/constrained_precond.hpp"
#include "kktp/error.hpp"

namespace kktp::bench {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string csv_header(const GmresConfig& cfg) {
  return "# tol=" + format_double(cfg.tol) + " max_iters=" + std::to_string(cfg.max_iters) +
         " criterion=" + std::string(to_string(cfg.kind())) + "\ncase,precond,kappa,gamma,k,p,q,n_elem,iters,converged";
}

std::string csv_row(const SolveRow& r) {
  return r.case_name + "," + r.precond + "," + format_double(r.kappa) + "," + format_double(r.gamma) + "," +
         std::to_string(r.k) + "," + std::to_string(r.p) + "," + std::to_string(r.q) + "," + std::to_string(r.n_elem) +
         "," + std::to_string(r.iters) + "," + (r.converged ? "true" : "false");
}

std::vector<double> dense_reference(const KktSystem& sys, std::size_t cap) {
  const KktOperator op(sys);
  return dense_solve(materialize_dense(op, cap), sys.rhs());
}

SolveRow solve_one(const KktSystem& sys, const SystemInfo& info, const std::vector<double>& reference,
                   const std::string& precond, const GmresConfig& cfg) {
  SolveRow row;
  row.case_name = info.case_name;
  row.precond = precond;
  row.kappa = sys.factors.kappa;
  row.gamma = sys.factors.gamma;
  row.k = info.k;
  if (info.layout) {
    row.p = info.layout->p;
    row.q = info.layout->q;
    row.n_elem = info.layout->n_elem;
  }
  // Name errors are the caller's problem, not a numerical failure.
  const AtVariant variant = parse_variant(precond);

  GmresConfig run = cfg;
  run.criterion = ExactSolution{reference};
  try {
    const auto m = build_at_preconditioner(sys, variant);
    const KktOperator op(sys);
    const SolveReport rep = gmres_solve(op, sys.rhs(), *m, run);
    row.iters = rep.iterations;
    row.converged = rep.converged;
    if (!rep.converged) row.iters = cfg.max_iters;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownVariant || e.code() == ErrorCode::InvalidArgument) throw;
    row.iters = cfg.max_iters;
    row.converged = false;
  }
  return row;
}

}  // namespace kktp::bench
