#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "kktp/bench.hpp"
#include "kktp/constrained_precond.hpp"
#include "kktp/error.hpp"

namespace kktp::bench {
namespace {

using nlohmann::json;

SweepAxis parse_axis(const std::string& s) {
  if (s == "kappa") return SweepAxis::Kappa;
  if (s == "gamma") return SweepAxis::Gamma;
  if (s == "state") return SweepAxis::State;
  if (s == "degree") return SweepAxis::Degree;
  if (s == "mesh") return SweepAxis::Mesh;
  throw_error(ErrorCode::InvalidArgument, "unknown sweep axis '" + s + "'");
}

// The "fixed" object reuses the generator's key-value parser so both inputs
// accept the same keys and report the same errors.
GeneratorConfig fixed_from_json(const json& j) {
  std::ostringstream text;
  for (const auto& [key, v] : j.items()) {
    text << key << " = ";
    if (v.is_boolean()) text << (v.get<bool>() ? "on" : "off");
    else if (v.is_string()) text << v.get<std::string>();
    else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) text << (i ? "," : "") << v[i].dump();
    } else text << v.dump();
    text << '\n';
  }
  std::istringstream is(text.str());
  return parse_config(is);
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Cell {
  std::string case_name;
  KktSystem system;
  SystemInfo info;
  std::vector<double> reference;
  bool reference_ok = true;
};

Cell make_cell(const shock1d::ShockTrackProblem1d& prob, shock1d::DgState state, std::string case_name) {
  Cell c;
  c.case_name = std::move(case_name);
  c.system = shock1d::build_kkt(prob, state);
  c.info.case_name = c.case_name;
  c.info.k = state.k;
  c.info.layout = prob.layout();
  c.info.kappa = state.kappa;
  c.info.gamma = state.gamma;
  try {
    c.reference = dense_reference(c.system);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SizeCapExceeded) throw;
    c.reference_ok = false;
  }
  return c;
}

}  // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Kappa: return "kappa";
    case SweepAxis::Gamma: return "gamma";
    case SweepAxis::State: return "state";
    case SweepAxis::Degree: return "degree";
    case SweepAxis::Mesh: return "mesh";
  }
  return "?";
}

SweepSpec parse_sweep_spec(std::istream& is) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw_error(ErrorCode::Parse, "sweep spec is not valid JSON: " + std::string(e.what()));
  }
  SweepSpec s;
  try {
    s.axis = parse_axis(j.at("axis").get<std::string>());
    const json& vals = j.at("values");
    if (!vals.is_array() || vals.empty()) throw_error(ErrorCode::InvalidArgument, "sweep values must be a nonempty list");
    for (const json& v : vals) {
      if (s.axis == SweepAxis::Degree) {
        if (!v.is_array() || v.size() != 2) throw_error(ErrorCode::InvalidArgument, "degree values must be [p, q] pairs");
        s.degrees.emplace_back(v[0].get<std::size_t>(), v[1].get<std::size_t>());
        s.values.push_back(static_cast<double>(s.degrees.size() - 1));
      } else {
        s.values.push_back(v.get<double>());
      }
    }
    if (j.contains("fixed")) s.fixed = fixed_from_json(j.at("fixed"));
    s.state = j.value("state", s.state);
    s.preconditioners = j.at("preconditioners").get<std::vector<std::string>>();
    s.tol = j.value("tol", s.tol);
    s.max_iters = j.value("max_iters", s.max_iters);
    s.threads = j.value("threads", s.threads);
    if (j.contains("schedule"))
      for (const json& e : j.at("schedule")) s.schedule.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  } catch (const json::exception& e) {
    throw_error(ErrorCode::Parse, "malformed sweep spec: " + std::string(e.what()));
  }
  if (s.preconditioners.empty()) throw_error(ErrorCode::InvalidArgument, "sweep needs at least one preconditioner");
  for (const auto& name : s.preconditioners) parse_variant(name);
  if (s.threads == 0) s.threads = 1;
  return s;
}

SweepSpec read_sweep_spec(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw_error(ErrorCode::Io, "cannot open sweep spec '" + path.string() + "'");
  return parse_sweep_spec(is);
}

std::vector<SolveRow> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw_error(ErrorCode::InvalidArgument, "sweep values must be nonempty");
  if (spec.preconditioners.empty()) throw_error(ErrorCode::InvalidArgument, "sweep needs at least one preconditioner");
  for (const auto& name : spec.preconditioners) parse_variant(name);
  GmresConfig gcfg;
  gcfg.tol = spec.tol;
  gcfg.max_iters = spec.max_iters;
  gcfg.validate();

  // Systems are built serially (the SQP runs are cheap at this scale); only
  // the GMRES solves are distributed over threads.
  std::vector<Cell> cells;
  const std::string axis = to_string(spec.axis);
  if (spec.axis == SweepAxis::Kappa || spec.axis == SweepAxis::Gamma) {
    const Trajectory t = generate_trajectory(spec.fixed, spec.state);
    for (double v : spec.values) {
      shock1d::DgState s = state_at(t, spec.state);
      (spec.axis == SweepAxis::Kappa ? s.kappa : s.gamma) = v;
      cells.push_back(make_cell(t.problem, std::move(s), axis + "=" + label(v)));
    }
  } else if (spec.axis == SweepAxis::State) {
    std::size_t kmax = 0;
    for (double v : spec.values) kmax = std::max(kmax, static_cast<std::size_t>(v));
    const Trajectory t = generate_trajectory(spec.fixed, kmax);
    for (double v : spec.values) {
      const auto k = static_cast<std::size_t>(v);
      shock1d::DgState s = state_at(t, k);
      if (!spec.schedule.empty()) {
        const auto& [g, kap] = spec.schedule[std::min(k, spec.schedule.size() - 1)];
        s.gamma = g;
        s.kappa = kap;
      }
      cells.push_back(make_cell(t.problem, std::move(s), axis + "=" + std::to_string(k)));
    }
  } else {
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      GeneratorConfig cfg = spec.fixed;
      std::string name;
      if (spec.axis == SweepAxis::Degree) {
        cfg.p = spec.degrees.at(i).first;
        cfg.q = spec.degrees.at(i).second;
        name = "p=" + std::to_string(cfg.p) + ";q=" + std::to_string(cfg.q);
      } else {
        cfg.n_elem = static_cast<std::size_t>(spec.values[i]);
        name = "n_elem=" + std::to_string(cfg.n_elem);
      }
      const Trajectory t = generate_trajectory(cfg, spec.state);
      cells.push_back(make_cell(t.problem, state_at(t, spec.state), name));
    }
  }

  const std::size_t np = spec.preconditioners.size();
  const std::size_t n_tasks = cells.size() * np;
  std::vector<SolveRow> rows(n_tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const Cell& c = cells[task / np];
      const std::string& name = spec.preconditioners[task % np];
      try {
        if (c.reference_ok) {
          rows[task] = solve_one(c.system, c.info, c.reference, name, gcfg);
        } else {
          // Singular KKT matrix: no reference solution, so the cell counts as failed.
          SolveRow r;
          r.case_name = c.case_name;
          r.precond = name;
          r.kappa = c.info.kappa;
          r.gamma = c.info.gamma;
          r.k = c.info.k;
          r.p = c.info.layout->p;
          r.q = c.info.layout->q;
          r.n_elem = c.info.layout->n_elem;
          r.iters = spec.max_iters;
          rows[task] = r;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(spec.threads, std::max<std::size_t>(n_tasks, 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  // rows are already in (cell, preconditioner) order because each task writes its own slot.
  return rows;
}

}  // namespace kktp::bench
