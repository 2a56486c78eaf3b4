#include <fstream>
#include <system_error>

#include "json.hpp"

#include "kktp/bench.hpp"
#include "kktp/error.hpp"
#include "kktp/matrix_market.hpp"

namespace kktp::bench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kMatrixKeys[] = {"ju", "drdu", "drdx", "drmshdx", "dphidy", "d", "jy"};

fs::path resolve(const fs::path& base, const json& files, const char* key) {
  if (!files.contains(key)) throw_error(ErrorCode::Parse, std::string("manifest lacks file entry '") + key + "'");
  const fs::path p = base / files.at(key).get<std::string>();
  if (!fs::exists(p)) throw_error(ErrorCode::Io, "manifest references missing file '" + p.string() + "'");
  return p;
}

void expect_dim(const json& dims, const char* key, std::size_t actual) {
  const auto want = dims.at(key).get<std::size_t>();
  if (want != actual)
    throw_error(ErrorCode::DimensionMismatch, std::string("manifest dimension ") + key + " = " + std::to_string(want) +
                                                  " but the matrices give " + std::to_string(actual));
}

}  // namespace

fs::path export_system(const KktSystem& sys, const SystemInfo& info, const fs::path& dir, const std::string& stem) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_error(ErrorCode::Io, "cannot create directory '" + dir.string() + "': " + ec.message());

  const KktFactors& f = sys.factors;
  json files;
  auto name = [&](const std::string& what) { return stem + "_" + what + ".mtx"; };
  write_matrix_market(dir / name("ju"), f.ju);
  write_matrix_market(dir / name("drdu"), f.drdu);
  write_matrix_market(dir / name("drdx"), f.drdx);
  write_matrix_market(dir / name("drmshdx"), f.drmshdx);
  write_matrix_market(dir / name("dphidy"), f.dphidy);
  write_matrix_market(dir / name("d"), f.d);
  write_matrix_market(dir / name("jy"), f.jy);
  write_vector(dir / name("g"), sys.g);
  write_vector(dir / name("r"), sys.r);
  for (const char* key : kMatrixKeys) files[key] = name(key);
  files["g"] = name("g");
  files["r"] = name("r");

  json m;
  m["version"] = kManifestVersion;
  m["case"] = info.case_name;
  m["k"] = info.k;
  m["dimensions"] = {{"n_u", f.n_u()}, {"n_u_enriched", f.n_u_enriched()}, {"n_y", f.n_y()}, {"n_x", f.n_x()}};
  if (info.layout) {
    m["dimensions"]["n_elem"] = info.layout->n_elem;
    m["dimensions"]["p"] = info.layout->p;
    m["dimensions"]["q"] = info.layout->q;
  }
  m["kappa"] = f.kappa;
  m["gamma"] = f.gamma;
  m["files"] = files;

  const fs::path out = dir / (stem + ".json");
  std::ofstream os(out);
  if (!os) throw_error(ErrorCode::Io, "cannot write manifest '" + out.string() + "'");
  os << m.dump(2) << '\n';
  if (!os) throw_error(ErrorCode::Io, "write failed for '" + out.string() + "'");
  return out;
}

LoadedSystem import_system(const fs::path& manifest) {
  std::ifstream is(manifest);
  if (!is) throw_error(ErrorCode::Io, "cannot open manifest '" + manifest.string() + "'");
  json m;
  try {
    is >> m;
  } catch (const json::exception& e) {
    throw_error(ErrorCode::Parse, "manifest is not valid JSON: " + std::string(e.what()));
  }
  try {
    if (m.at("version").get<int>() != kManifestVersion)
      throw_error(ErrorCode::Parse, "unsupported manifest version " + m.at("version").dump());
    const fs::path base = manifest.parent_path();
    const json& files = m.at("files");

    KktFactors f;
    f.ju = read_block_matrix(resolve(base, files, "ju"));
    f.drdu = read_block_matrix(resolve(base, files, "drdu"));
    f.drdx = read_block_matrix(resolve(base, files, "drdx"));
    f.drmshdx = read_point_matrix(resolve(base, files, "drmshdx"));
    f.dphidy = read_point_matrix(resolve(base, files, "dphidy"));
    f.d = read_point_matrix(resolve(base, files, "d"));
    f.jy = read_point_matrix(resolve(base, files, "jy"));
    f.kappa = m.at("kappa").get<double>();
    f.gamma = m.at("gamma").get<double>();

    const json& dims = m.at("dimensions");
    expect_dim(dims, "n_u", f.n_u());
    expect_dim(dims, "n_u_enriched", f.n_u_enriched());
    expect_dim(dims, "n_y", f.n_y());
    expect_dim(dims, "n_x", f.n_x());

    LoadedSystem out;
    out.info.case_name = m.value("case", std::string("system"));
    out.info.k = m.value("k", std::size_t{0});
    out.info.kappa = f.kappa;
    out.info.gamma = f.gamma;
    if (dims.contains("n_elem")) {
      Layout1d l{dims.at("n_elem").get<std::size_t>(), dims.at("p").get<std::size_t>(), dims.at("q").get<std::size_t>()};
      if (l.n_elem * (l.p + 1) != f.n_u() || l.q * l.n_elem + 1 != f.n_x())
        throw_error(ErrorCode::DimensionMismatch, "manifest layout (n_elem, p, q) disagrees with the matrices");
      f.layout = l;
      out.info.layout = l;
    }
    std::vector<double> g = read_vector(resolve(base, files, "g"));
    std::vector<double> r = read_vector(resolve(base, files, "r"));
    out.system = make_kkt_system(std::move(f), std::move(g), std::move(r));
    return out;
  } catch (const json::exception& e) {
    throw_error(ErrorCode::Parse, "malformed manifest: " + std::string(e.what()));
  }
}

}  // namespace kktp::bench
