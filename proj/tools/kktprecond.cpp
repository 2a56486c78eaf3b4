// kktprecond: generate shock-tracking KKT systems, solve them with the
// preconditioner catalog and sweep study axes.
//
// Exit codes: 0 success, 2 usage error, 1 numerical or I/O failure.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "kktp/bench.hpp"
#include "kktp/constrained_precond.hpp"
#include "kktp/error.hpp"
#include "kktp/krylov.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kFailure = 1;

bool is_usage_error(kktp::ErrorCode c) {
  using kktp::ErrorCode;
  return c == ErrorCode::UnknownVariant || c == ErrorCode::InvalidArgument || c == ErrorCode::Parse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained preconditioners for shock-tracking KKT systems"};
  app.require_subcommand(1);

  std::string gen_config, gen_outdir;
  auto* gen = app.add_subcommand("generate", "Run SQP on a 1D problem and export KKT systems");
  gen->add_option("config", gen_config, "key = value problem config")->required();
  gen->add_option("outdir", gen_outdir, "output directory (created if missing)")->required();

  std::string solve_manifest, solve_precond;
  double solve_tol = kktp::kDefaultGmresTol;
  std::size_t solve_max = kktp::kDefaultGmresMaxIters;
  auto* solve = app.add_subcommand("solve", "Solve an exported system with GMRES");
  solve->add_option("manifest", solve_manifest, "system manifest (JSON)")->required();
  solve->add_option("--precond", solve_precond, "catalog name: A0 BJ BILU BJ-ilu BILU-ilu A0-p0 BJ-p0 BILU-p0")
      ->required();
  solve->add_option("--tol", solve_tol, "relative error tolerance")->capture_default_str();
  solve->add_option("--max-iters", solve_max, "GMRES iteration limit")->capture_default_str();

  std::string sweep_spec;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and print a CSV table");
  sweep->add_option("spec", sweep_spec, "sweep spec (JSON)")->required();

  std::size_t st_n = 0, st_b = 0;
  std::uint64_t st_seed = 0;
  int st_points = 5;
  std::string st_out;
  auto* stencil = app.add_subcommand("stencil", "Write a synthetic 2D block-stencil matrix");
  stencil->add_option("--n", st_n, "grid size n (n x n block rows)")->required();
  stencil->add_option("--block", st_b, "block size")->required();
  stencil->add_option("--seed", st_seed, "random seed")->required();
  stencil->add_option("--points", st_points, "stencil arity (5 or 9)")->capture_default_str();
  stencil->add_option("out", st_out, "output Matrix Market file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    namespace b = kktp::bench;
    if (*gen) return b::cmd_generate(gen_config, gen_outdir, std::cout);
    if (*solve) return b::cmd_solve(solve_manifest, solve_precond, solve_tol, solve_max, std::cout);
    if (*sweep) return b::cmd_sweep(sweep_spec, std::cout);
    if (*stencil) return b::cmd_stencil(st_n, st_b, st_seed, st_points, st_out, std::cout);
  } catch (const kktp::Error& e) {
    std::cerr << "kktprecond: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kUsageError : kFailure;
  } catch (const std::exception& e) {
    std::cerr << "kktprecond: " << e.what() << '\n';
    return kFailure;
  }
  return kUsageError;
}
