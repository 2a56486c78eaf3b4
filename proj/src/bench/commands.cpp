#include <ostream>

#include "kktp/bench.hpp"
#include "kktp/constrained_precond.hpp"
#include "kktp/error.hpp"
#include "kktp/matrix_market.hpp"

namespace kktp::bench {

int cmd_generate(const std::filesystem::path& config, const std::filesystem::path& outdir, std::ostream& out) {
  const GeneratorConfig cfg = read_config(config);
  std::size_t kmax = 0;
  for (std::size_t k : cfg.states) kmax = std::max(kmax, k);
  const Trajectory t = generate_trajectory(cfg, std::min(kmax, cfg.sqp_max_iters));
  out << "# sqp: " << t.states.size() - 1 << " steps, " << t.stop_reason << '\n';
  for (std::size_t k : cfg.states) {
    const shock1d::DgState& s = state_at(t, k);
    const KktSystem sys = shock1d::build_kkt(t.problem, s);
    SystemInfo info;
    info.case_name = "burgers1d";
    info.k = s.k;
    info.layout = t.problem.layout();
    info.kappa = s.kappa;
    info.gamma = s.gamma;
    out << export_system(sys, info, outdir, "k" + std::to_string(k)).string() << '\n';
  }
  return 0;
}

int cmd_solve(const std::filesystem::path& manifest, const std::string& precond, double tol, std::size_t max_iters,
              std::ostream& out) {
  parse_variant(precond);  // usage error before any file is read
  const LoadedSystem loaded = import_system(manifest);
  GmresConfig cfg;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  const std::vector<double> ref = dense_reference(loaded.system);
  cfg.criterion = ExactSolution{ref};
  cfg.validate();
  const SolveRow row = solve_one(loaded.system, loaded.info, ref, precond, cfg);
  out << csv_header(cfg) << '\n' << csv_row(row) << '\n';
  return 0;
}

int cmd_sweep(const std::filesystem::path& spec_path, std::ostream& out) {
  const SweepSpec spec = read_sweep_spec(spec_path);
  const std::vector<SolveRow> rows = run_sweep(spec);
  GmresConfig cfg;
  cfg.tol = spec.tol;
  cfg.max_iters = spec.max_iters;
  cfg.criterion = ExactSolution{};
  out << csv_header(cfg) << '\n';
  for (const SolveRow& r : rows) out << csv_row(r) << '\n';
  return 0;
}

int cmd_stencil(std::size_t n, std::size_t b, std::uint64_t seed, int points, const std::filesystem::path& out_path,
                std::ostream& out) {
  const BlockCsrMatrix a = generate_stencil_system(n, b, seed, points);
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  write_matrix_market(out_path, a);
  out << out_path.string() << ": " << a.rows() << " rows, " << a.nnz_blocks() << " blocks\n";
  return 0;
}

}  // namespace kktp::bench
