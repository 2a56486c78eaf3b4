#pragma once

// Benchmark harness: problem configuration, system export/import, the
// synthetic stencil generator and GMRES sweeps over study axes.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kktp/block_csr.hpp"
#include "kktp/kkt.hpp"
#include "kktp/krylov.hpp"
#include "kktp/shock1d.hpp"

namespace kktp::bench {

// ---- generator configuration ---------------------------------------------

/// Key-value text config (`key = value`, `#` comments). Recognised keys:
/// n_elem, p, q, gamma, kappa, source (on/off), flux (burgers/linear),
/// bc_left, bc_right, seed, jitter, states (comma list of SQP iterations),
/// sqp_max_iters, init_width.
struct GeneratorConfig {
  std::size_t n_elem = 8;
  std::size_t p = 1;
  std::size_t q = 1;
  double gamma = 1e-2;
  double kappa = 1e-7;
  bool source = true;
  shock1d::FluxKind flux = shock1d::FluxKind::Burgers;
  double bc_left = 0.4;
  double bc_right = -0.6;
  std::uint64_t seed = 0;
  double jitter = 0.0;
  std::vector<std::size_t> states{1};
  std::size_t sqp_max_iters = 100;
  double init_width = 0.05;
};

GeneratorConfig parse_config(std::istream& is);
GeneratorConfig read_config(const std::filesystem::path& path);
shock1d::ShockTrackProblem1d make_problem(const GeneratorConfig& cfg);

/// SQP trajectory from the smoothed initial state. Never throws for a
/// failed line search: the trajectory up to the failure is returned.
struct Trajectory {
  shock1d::ShockTrackProblem1d problem;
  std::vector<shock1d::DgState> states;
  bool converged = false;
  std::string stop_reason;
};
Trajectory generate_trajectory(const GeneratorConfig& cfg, std::size_t max_iters);

/// State k of a trajectory; indices past the end select the final state.
const shock1d::DgState& state_at(const Trajectory& t, std::size_t k);

// ---- manifest -----------------------------------------------------------------

struct SystemInfo {
  std::string case_name = "system";
  std::size_t k = 0;
  std::optional<Layout1d> layout;
  double kappa = 0.0;
  double gamma = 0.0;
};

inline constexpr int kManifestVersion = 1;

/// Writes 7 factor matrices, g and r as Matrix Market files plus a JSON
/// manifest named `<stem>.json`. Creates the directory. Returns the manifest path.
std::filesystem::path export_system(const KktSystem& sys, const SystemInfo& info, const std::filesystem::path& dir,
                                    const std::string& stem);

struct LoadedSystem {
  KktSystem system;
  SystemInfo info;
};
/// Throws Io for missing files and DimensionMismatch when the manifest and
/// the matrices disagree.
LoadedSystem import_system(const std::filesystem::path& manifest);

// ---- stencil generator ---------------------------------------------------------

/// Block matrix on an n x n grid with 5- or 9-point block coupling. Diagonal
/// blocks are (b + 2) I plus uniform noise in [-0.5, 0.5]; off-diagonal blocks
/// are uniform random rescaled to Frobenius norm 0.25.
BlockCsrMatrix generate_stencil_system(std::size_t n, std::size_t b, std::uint64_t seed, int points = 5);

// ---- solves and sweeps -----------------------------------------------------------

struct SolveRow {
  std::string case_name;
  std::string precond;
  double kappa = 0.0;
  double gamma = 0.0;
  std::size_t k = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t n_elem = 0;
  std::size_t iters = 0;
  bool converged = false;
};

std::string csv_header(const GmresConfig& cfg);
std::string csv_row(const SolveRow& row);

/// Reference solution of the full KKT system by dense LU.
std::vector<double> dense_reference(const KktSystem& sys, std::size_t cap = kDefaultDenseCap);

/// One preconditioned GMRES solve with the exact-solution criterion. Numerical
/// failures while building the preconditioner give converged = false and
/// iters = max_iters.
SolveRow solve_one(const KktSystem& sys, const SystemInfo& info, const std::vector<double>& reference,
                   const std::string& precond, const GmresConfig& cfg);

enum class SweepAxis { Kappa, Gamma, State, Degree, Mesh };

struct SweepSpec {
  SweepAxis axis = SweepAxis::Gamma;
  /// Axis values. The degree axis takes [p, q] pairs in JSON, kept in `degrees`.
  std::vector<double> values;
  std::vector<std::pair<std::size_t, std::size_t>> degrees;
  GeneratorConfig fixed;
  std::size_t state = 1;  // SQP iteration used by the kappa, gamma, degree and mesh axes
  std::vector<std::string> preconditioners;
  double tol = kDefaultGmresTol;
  std::size_t max_iters = kDefaultGmresMaxIters;
  std::size_t threads = 1;
  /// Optional (gamma_k, kappa_k) per SQP iteration for the state axis.
  std::vector<std::pair<double, double>> schedule;
};

SweepSpec parse_sweep_spec(std::istream& is);
SweepSpec read_sweep_spec(const std::filesystem::path& path);
std::string to_string(SweepAxis axis);

/// Rows ordered by axis value index, then preconditioner list order, whatever
/// the thread count.
std::vector<SolveRow> run_sweep(const SweepSpec& spec);

// ---- commands ---------------------------------------------------------------------

int cmd_generate(const std::filesystem::path& config, const std::filesystem::path& outdir, std::ostream& out);
int cmd_solve(const std::filesystem::path& manifest, const std::string& precond, double tol, std::size_t max_iters,
              std::ostream& out);
int cmd_sweep(const std::filesystem::path& spec, std::ostream& out);
int cmd_stencil(std::size_t n, std::size_t b, std::uint64_t seed, int points, const std::filesystem::path& out_path,
                std::ostream& out);

}  // namespace kktp::bench
