#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "kktp/bench.hpp"
#include "kktp/error.hpp"

namespace kktp::bench {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::size_t line) {
  throw_error(ErrorCode::Parse,
              "config line " + std::to_string(line) + ": bad value '" + std::string(value) + "' for " + std::string(key),
              line);
}

double to_double(std::string_view key, std::string_view v, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, line);
  return out;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view v, std::size_t line) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, line);
  return out;
}

bool to_bool(std::string_view key, std::string_view v, std::size_t line) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, line);
}

}  // namespace

GeneratorConfig parse_config(std::istream& is) {
  GeneratorConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw_error(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected key = value", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key == "n_elem") cfg.n_elem = to_unsigned(key, val, line_no);
    else if (key == "p") cfg.p = to_unsigned(key, val, line_no);
    else if (key == "q") cfg.q = to_unsigned(key, val, line_no);
    else if (key == "gamma") cfg.gamma = to_double(key, val, line_no);
    else if (key == "kappa") cfg.kappa = to_double(key, val, line_no);
    else if (key == "source") cfg.source = to_bool(key, val, line_no);
    else if (key == "flux") {
      if (val == "burgers") cfg.flux = shock1d::FluxKind::Burgers;
      else if (val == "linear") cfg.flux = shock1d::FluxKind::Linear;
      else bad_value(key, val, line_no);
    } else if (key == "bc_left") cfg.bc_left = to_double(key, val, line_no);
    else if (key == "bc_right") cfg.bc_right = to_double(key, val, line_no);
    else if (key == "seed") cfg.seed = to_unsigned(key, val, line_no);
    else if (key == "jitter") cfg.jitter = to_double(key, val, line_no);
    else if (key == "sqp_max_iters") cfg.sqp_max_iters = to_unsigned(key, val, line_no);
    else if (key == "init_width") cfg.init_width = to_double(key, val, line_no);
    else if (key == "states") {
      cfg.states.clear();
      std::string_view rest = val;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        cfg.states.push_back(to_unsigned(key, trim(rest.substr(0, comma)), line_no));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      if (cfg.states.empty()) bad_value(key, val, line_no);
    } else {
      throw_error(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'",
                  line_no);
    }
  }
  return cfg;
}

GeneratorConfig read_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw_error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
  return parse_config(is);
}

shock1d::ShockTrackProblem1d make_problem(const GeneratorConfig& cfg) {
  shock1d::ShockTrackProblem1d prob = shock1d::make_problem(cfg.n_elem, cfg.p, cfg.q, cfg.jitter, cfg.seed);
  prob.flux = cfg.flux;
  prob.source = cfg.source;
  prob.bc_left = cfg.bc_left;
  prob.bc_right = cfg.bc_right;
  return prob;
}

Trajectory generate_trajectory(const GeneratorConfig& cfg, std::size_t max_iters) {
  Trajectory t;
  t.problem = make_problem(cfg);
  shock1d::SqpConfig sqp;
  sqp.max_iters = max_iters;
  sqp.kappa = cfg.kappa;
  sqp.gamma = cfg.gamma;
  const shock1d::DgState init = shock1d::smoothed_initial_state(t.problem, cfg.init_width, cfg.kappa, cfg.gamma);
  try {
    shock1d::SqpResult res = shock1d::run_sqp(t.problem, init, sqp);
    t.states = std::move(res.states);
    t.converged = res.converged;
    t.stop_reason = res.converged ? "converged" : "iteration limit";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LineSearchFailure) throw;
    // Re-run up to the failing iteration to keep the accepted prefix.
    sqp.max_iters = e.index();
    t.states = shock1d::run_sqp(t.problem, init, sqp).states;
    t.stop_reason = e.what();
  }
  return t;
}

const shock1d::DgState& state_at(const Trajectory& t, std::size_t k) {
  if (t.states.empty()) throw_error(ErrorCode::InvalidArgument, "empty trajectory");
  return k < t.states.size() ? t.states[k] : t.states.back();
}

}  // namespace kktp::bench
