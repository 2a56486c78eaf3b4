#include "kktp/matrix_market.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "kktp/error.hpp"

namespace kktp {
namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::vector<std::size_t> parse_list(std::string_view s) {
  std::vector<std::size_t> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string_view tok = s.substr(pos, comma - pos);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw_error(ErrorCode::Parse, "bad block size '" + std::string(tok) + "'");
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw_error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw_error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return is;
}

void write_entries(std::ostream& os, const PointCsrMatrix& a) {
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      os << i + 1 << ' ' << a.col_idx()[k] + 1 << ' ' << format_real(a.values()[k]) << '\n';
}

}  // namespace

void write_matrix_market(std::ostream& os, const PointCsrMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  write_entries(os, a);
  if (!os) throw_error(ErrorCode::Io, "write failed");
}

void write_matrix_market(std::ostream& os, const BlockCsrMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << "%%block-sizes rows=" << join(a.pattern().row_block_sizes) << " cols=" << join(a.pattern().col_block_sizes)
     << '\n';
  write_entries(os, block_to_point(a));
  if (!os) throw_error(ErrorCode::Io, "write failed");
}

MatrixMarketFile read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw_error(ErrorCode::Parse, "empty Matrix Market stream");
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix" || format != "coordinate")
    throw_error(ErrorCode::Parse, "expected '%%MatrixMarket matrix coordinate ...' banner");
  if (field != "real" && field != "integer") throw_error(ErrorCode::Parse, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw_error(ErrorCode::Parse, "unsupported symmetry '" + symmetry + "'");

  MatrixMarketFile out;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] != '%') break;
    if (line.rfind("%%block-sizes", 0) == 0) {
      std::istringstream hs(line.substr(13));
      std::string tok;
      while (hs >> tok) {
        if (tok.rfind("rows=", 0) == 0) out.row_block_sizes = parse_list(std::string_view(tok).substr(5));
        else if (tok.rfind("cols=", 0) == 0) out.col_block_sizes = parse_list(std::string_view(tok).substr(5));
        else throw_error(ErrorCode::Parse, "unknown block-sizes field '" + tok + "'");
      }
    }
  }
  std::size_t m = 0, n = 0, nnz = 0;
  if (!(std::istringstream(line) >> m >> n >> nnz)) throw_error(ErrorCode::Parse, "bad size line '" + line + "'");

  std::vector<Triplet> t;
  t.reserve(symmetry == "symmetric" ? 2 * nnz : nnz);
  for (std::size_t e = 0; e < nnz; ++e) {
    std::size_t i = 0, j = 0;
    std::string value_text;
    if (!(is >> i >> j >> value_text)) throw_error(ErrorCode::Parse, "truncated entry list", e);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), v);
    if (ec != std::errc{} || ptr != value_text.data() + value_text.size())
      throw_error(ErrorCode::Parse, "bad value '" + value_text + "'", e);
    if (i == 0 || j == 0) throw_error(ErrorCode::Parse, "Matrix Market indices are 1-based", e);
    t.push_back({i - 1, j - 1, v});
    if (symmetry == "symmetric" && i != j) t.push_back({j - 1, i - 1, v});
  }
  out.matrix = assemble_point_csr(m, n, t);
  return out;
}

void write_matrix_market(const std::filesystem::path& path, const PointCsrMatrix& a) {
  auto os = open_out(path);
  write_matrix_market(os, a);
}

void write_matrix_market(const std::filesystem::path& path, const BlockCsrMatrix& a) {
  auto os = open_out(path);
  write_matrix_market(os, a);
}

MatrixMarketFile read_matrix_market(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_matrix_market(is);
}

PointCsrMatrix read_point_matrix(const std::filesystem::path& path) { return read_matrix_market(path).matrix; }

BlockCsrMatrix read_block_matrix(const std::filesystem::path& path) {
  MatrixMarketFile f = read_matrix_market(path);
  if (!f.row_block_sizes || !f.col_block_sizes)
    throw_error(ErrorCode::Parse, "'" + path.string() + "' has no %%block-sizes line");
  return point_to_block(f.matrix, std::move(*f.row_block_sizes), std::move(*f.col_block_sizes));
}

void write_vector(std::ostream& os, const std::vector<double>& v) {
  os << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n";
  for (double x : v) os << format_real(x) << '\n';
  if (!os) throw_error(ErrorCode::Io, "write failed");
}

std::vector<double> read_vector(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw_error(ErrorCode::Parse, "empty vector stream");
  std::istringstream banner(lower(line));
  std::string tag, object, format;
  banner >> tag >> object >> format;
  if (tag != "%%matrixmarket" || format != "array") throw_error(ErrorCode::Parse, "expected array banner");
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '%') break;
  std::size_t m = 0, n = 0;
  if (!(std::istringstream(line) >> m >> n) || n != 1) throw_error(ErrorCode::Parse, "bad vector size line");
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::string tok;
    if (!(is >> tok)) throw_error(ErrorCode::Parse, "truncated vector", i);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v[i]);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw_error(ErrorCode::Parse, "bad value '" + tok + "'", i);
  }
  return v;
}

void write_vector(const std::filesystem::path& path, const std::vector<double>& v) {
  auto os = open_out(path);
  write_vector(os, v);
}

std::vector<double> read_vector(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_vector(is);
}

}  // namespace kktp
