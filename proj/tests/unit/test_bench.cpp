#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "kktp/bench.hpp"
#include "kktp/error.hpp"
#include "kktp/matrix_market.hpp"

using namespace kktp;
using namespace kktp::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("kktp_unit_" + name);
  fs::remove_all(d);
  return d;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generator config parsing") {
  std::istringstream is(
      "# comment line\n"
      "n_elem = 12\n p = 2\nq=2\n"
      "gamma = 1e-3   # trailing comment\n"
      "kappa = 0\nsource = off\nflux = linear\n"
      "bc_left = 0.5\nbc_right = -0.5\nseed = 9\njitter = 0.1\n"
      "states = 0, 2,5\nsqp_max_iters = 7\ninit_width = 0.1\n");
  const auto c = parse_config(is);
  CHECK(c.n_elem == 12);
  CHECK(c.p == 2);
  CHECK(c.q == 2);
  CHECK(c.gamma == 1e-3);
  CHECK(c.kappa == 0.0);
  CHECK_FALSE(c.source);
  CHECK(c.flux == shock1d::FluxKind::Linear);
  CHECK(c.bc_left == 0.5);
  CHECK(c.bc_right == -0.5);
  CHECK(c.seed == 9);
  CHECK(c.jitter == 0.1);
  CHECK(c.states == std::vector<std::size_t>{0, 2, 5});
  CHECK(c.sqp_max_iters == 7);
  CHECK(c.init_width == 0.1);

  std::istringstream empty("");
  const auto d = parse_config(empty);
  CHECK(d.n_elem == 8);
  CHECK(d.p == 1);
  CHECK(d.gamma == 1e-2);
  CHECK(d.kappa == 1e-7);

  for (const char* bad : {"colour = red\n", "n_elem = many\n", "source = maybe\n", "p\n", "flux = euler\n"}) {
    std::istringstream b(bad);
    CHECK(code_of([&] { parse_config(b); }) == ErrorCode::Parse);
  }
  CHECK(code_of([] { read_config("/nonexistent/kktp.cfg"); }) == ErrorCode::Io);
}

TEST_CASE("trajectory states clamp to the final state") {
  GeneratorConfig cfg;
  const auto t = generate_trajectory(cfg, 100);
  REQUIRE(t.converged);
  CHECK(&state_at(t, 1000) == &t.states.back());
  CHECK(state_at(t, 0).k == 0);
}

TEST_CASE("manifest export and import round trip") {
  GeneratorConfig cfg;
  cfg.p = 2;
  cfg.q = 2;
  const auto t = generate_trajectory(cfg, 1);
  const KktSystem sys = shock1d::build_kkt(t.problem, state_at(t, 1));
  const fs::path dir = scratch_dir("manifest") / "nested" / "out";
  SystemInfo info;
  info.case_name = "roundtrip";
  info.k = 1;
  info.layout = t.problem.layout();
  info.kappa = sys.factors.kappa;
  info.gamma = sys.factors.gamma;
  const fs::path manifest = export_system(sys, info, dir, "k1");
  CHECK(fs::exists(manifest));
  std::size_t mtx = 0;
  for (const auto& e : fs::directory_iterator(dir)) mtx += e.path().extension() == ".mtx";
  CHECK(mtx == 9);

  const auto loaded = import_system(manifest);
  CHECK(loaded.info.case_name == "roundtrip");
  CHECK(loaded.info.k == 1);
  CHECK(loaded.info.layout == info.layout);
  CHECK(loaded.system.g == sys.g);
  CHECK(loaded.system.r == sys.r);
  CHECK(loaded.system.factors.kappa == sys.factors.kappa);
  CHECK(oracle::from_point(loaded.system.byy) == oracle::from_point(sys.byy));
  const auto a = oracle::from_dense(materialize_dense(KktOperator(sys)));
  const auto b = oracle::from_dense(materialize_dense(KktOperator(loaded.system)));
  CHECK(oracle::rel_diff(b, a) <= 1e-12);
  CHECK(loaded.system.factors.ju.pattern() == sys.factors.ju.pattern());

  // Deleting a referenced file is an I/O error on load.
  fs::remove(dir / "k1_jy.mtx");
  CHECK(code_of([&] { import_system(manifest); }) == ErrorCode::Io);
  fs::remove_all(scratch_dir("manifest"));
}

TEST_CASE("manifest import detects dimension mismatches and bad JSON") {
  const KktSystem sys = fixture::random_system(4, 1, 1, 3);
  const fs::path dir = scratch_dir("mismatch");
  SystemInfo info;
  info.layout = sys.factors.layout;
  const fs::path manifest = export_system(sys, info, dir, "s");
  std::string text = slurp(manifest);
  const auto pos = text.find("\"n_elem\": 4");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 11, "\"n_elem\": 5");
  std::ofstream(manifest) << text;
  CHECK(code_of([&] { import_system(manifest); }) == ErrorCode::DimensionMismatch);
  std::ofstream(manifest) << "{ not json";
  CHECK(code_of([&] { import_system(manifest); }) == ErrorCode::Parse);
  fs::remove_all(dir);
}

TEST_CASE("export into an unwritable location is an I/O error") {
  // A directory cannot be created beneath a regular file, even for root.
  const fs::path dir = scratch_dir("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  const KktSystem sys = fixture::random_system(3, 1, 1, 1);
  CHECK(code_of([&] { export_system(sys, SystemInfo{}, dir / "file" / "sub", "s"); }) == ErrorCode::Io);
  fs::remove_all(dir);
}

TEST_CASE("stencil generator examples") {
  const auto one = generate_stencil_system(1, 3, 0);
  CHECK(one.n_block_rows() == 1);
  CHECK(one.nnz_blocks() == 1);

  const auto s = generate_stencil_system(3, 1, 4);
  CHECK(s.rows() == 9);
  const auto& p = s.pattern();
  CHECK(p.row_ptr[5] - p.row_ptr[4] == 5);
  CHECK(p.row_ptr[1] - p.row_ptr[0] == 3);
  const auto nine = generate_stencil_system(3, 1, 4, 9);
  CHECK(nine.pattern().row_ptr[5] - nine.pattern().row_ptr[4] == 9);

  const auto b = generate_stencil_system(4, 3, 11);
  for (std::size_t k = 0; k < b.nnz_blocks(); ++k) {
    if (b.block_row(k) == b.block_col(k)) continue;
    CHECK(b.block(k).to_dense().frobenius_norm() == doctest::Approx(0.25).epsilon(1e-14));
  }
  CHECK_THROWS_AS(generate_stencil_system(3, 2, 1, 7), Error);
  CHECK_THROWS_AS(generate_stencil_system(0, 2, 1), Error);
}

TEST_CASE("stencil generator is byte-for-byte deterministic") {
  const fs::path dir = scratch_dir("stencil");
  std::ostringstream log;
  CHECK(cmd_stencil(5, 2, 42, 5, dir / "a" / "s.mtx", log) == 0);
  CHECK(cmd_stencil(5, 2, 42, 5, dir / "b.mtx", log) == 0);
  CHECK(cmd_stencil(5, 2, 43, 5, dir / "c.mtx", log) == 0);
  CHECK(slurp(dir / "a" / "s.mtx") == slurp(dir / "b.mtx"));
  CHECK(slurp(dir / "a" / "s.mtx") != slurp(dir / "c.mtx"));
  const auto back = read_block_matrix(dir / "b.mtx");
  CHECK(oracle::from_block(back) == oracle::from_block(generate_stencil_system(5, 2, 42)));
  fs::remove_all(dir);
}

TEST_CASE("CSV header carries the solver settings") {
  GmresConfig cfg;
  const std::string h = csv_header(cfg);
  CHECK(h.find("tol=0.001") != std::string::npos);
  CHECK(h.find("max_iters=1000") != std::string::npos);
  CHECK(h.find("case,precond,kappa,gamma,k,p,q,n_elem,iters,converged") != std::string::npos);
  SolveRow r;
  r.case_name = "c";
  r.precond = "BJ";
  r.kappa = 1e-7;
  r.gamma = 0.01;
  r.k = 2;
  r.p = 1;
  r.q = 2;
  r.n_elem = 8;
  r.iters = 17;
  r.converged = true;
  CHECK(csv_row(r) == "c,BJ,1e-07,0.01,2,1,2,8,17,true");
}

TEST_CASE("solve_one: A0 is exact on uncoupled systems and beats BJ") {
  const KktSystem sys = without_uu_coupling(fixture::random_system(6, 1, 1, 5));
  const auto ref = dense_reference(sys);
  const SystemInfo info;
  const GmresConfig cfg;
  const auto a0 = solve_one(sys, info, ref, "A0", cfg);
  const auto bj = solve_one(sys, info, ref, "BJ", cfg);
  CHECK(a0.converged);
  CHECK(a0.iters == 1);
  CHECK(bj.iters >= a0.iters);
  CHECK(code_of([&] { solve_one(sys, info, ref, "XYZ", cfg); }) == ErrorCode::UnknownVariant);
}

TEST_CASE("sweep spec parsing and validation") {
  std::istringstream is(R"({"axis": "degree", "values": [[1, 1], [2, 2]], "preconditioners": ["A0", "BJ"],
                            "fixed": {"n_elem": 6, "gamma": 0.1}, "threads": 3, "state": 2,
                            "schedule": [[0.1, 1e-7], [0.01, 1e-7]]})");
  const auto s = parse_sweep_spec(is);
  CHECK(s.axis == SweepAxis::Degree);
  CHECK(s.degrees.size() == 2);
  CHECK(s.degrees[1] == std::pair<std::size_t, std::size_t>{2, 2});
  CHECK(s.fixed.n_elem == 6);
  CHECK(s.fixed.gamma == 0.1);
  CHECK(s.threads == 3);
  CHECK(s.state == 2);
  CHECK(s.tol == 1e-3);
  CHECK(s.max_iters == 1000);
  CHECK(s.schedule.size() == 2);

  std::istringstream empty(R"({"axis": "gamma", "values": [0.1], "preconditioners": []})");
  CHECK(code_of([&] { parse_sweep_spec(empty); }) == ErrorCode::InvalidArgument);
  std::istringstream unknown(R"({"axis": "gamma", "values": [0.1], "preconditioners": ["ILU"]})");
  CHECK(code_of([&] { parse_sweep_spec(unknown); }) == ErrorCode::UnknownVariant);
  std::istringstream no_values(R"({"axis": "gamma", "values": [], "preconditioners": ["A0"]})");
  CHECK(code_of([&] { parse_sweep_spec(no_values); }) == ErrorCode::InvalidArgument);
  std::istringstream bad_axis(R"({"axis": "time", "values": [1], "preconditioners": ["A0"]})");
  CHECK_THROWS_AS(parse_sweep_spec(bad_axis), Error);
  std::istringstream garbage("not json");
  CHECK(code_of([&] { parse_sweep_spec(garbage); }) == ErrorCode::Parse);
}

TEST_CASE("sweep output is deterministic across thread counts") {
  SweepSpec spec;
  spec.axis = SweepAxis::Gamma;
  spec.values = {1e-1, 1e-3};
  spec.preconditioners = {"A0", "BJ", "BILU-ilu", "BJ-p0"};
  spec.fixed.n_elem = 6;
  spec.threads = 1;
  const auto serial = run_sweep(spec);
  spec.threads = 4;
  const auto parallel = run_sweep(spec);
  REQUIRE(serial.size() == 8);
  REQUIRE(parallel.size() == 8);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(csv_row(serial[i]) == csv_row(parallel[i]));
    CHECK(serial[i].precond == spec.preconditioners[i % 4]);
  }
  CHECK(serial[0].gamma == 1e-1);
  CHECK(serial[4].gamma == 1e-3);
}

TEST_CASE("sweep axes label their cases") {
  SweepSpec spec;
  spec.fixed.n_elem = 4;
  spec.preconditioners = {"A0"};
  spec.axis = SweepAxis::Mesh;
  spec.values = {4, 6};
  auto rows = run_sweep(spec);
  CHECK(rows[0].case_name == "n_elem=4");
  CHECK(rows[1].n_elem == 6);
  spec.axis = SweepAxis::Degree;
  spec.degrees = {{1, 2}};
  spec.values = {0};
  rows = run_sweep(spec);
  CHECK(rows[0].case_name == "p=1;q=2");
  CHECK(rows[0].q == 2);
  spec.axis = SweepAxis::State;
  spec.values = {0, 2};
  spec.schedule = {{0.5, 1e-6}};
  rows = run_sweep(spec);
  CHECK(rows[1].case_name == "state=2");
  CHECK(rows[1].gamma == 0.5);
  CHECK(rows[1].kappa == 1e-6);
  spec.preconditioners.clear();
  CHECK(code_of([&] { run_sweep(spec); }) == ErrorCode::InvalidArgument);
}
