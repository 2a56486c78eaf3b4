#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "kktp/dg_precond.hpp"
#include "kktp/error.hpp"

namespace kktp {
namespace {

// Static data for the weight evaluation: for each row k, the blocks A_ik
// (i != k) of column k, and X_kj = A_kk^{-1} A_kj for the off-diagonal blocks
// of row k.
struct MdfData {
  struct ColEntry {
    std::size_t row;
    std::size_t pos;
  };
  struct RowEntry {
    std::size_t col;
    DenseMatrix x;
  };
  std::vector<std::vector<ColEntry>> col_nb;
  std::vector<std::vector<RowEntry>> row_nb;
};

LuFactor diag_factor(const BlockCsrMatrix& a, std::size_t k) {
  const auto pos = a.find(k, k);
  if (!pos) throw_error(ErrorCode::MissingDiagonalBlock, "block row " + std::to_string(k) + " has no diagonal block", k);
  try {
    return dense_lu_factor(a.block(*pos).to_dense());
  } catch (const Error& e) {
    throw_error(e.code(), "diagonal block " + std::to_string(k) + ": " + e.what(), k);
  }
}

void require_square(const BlockCsrMatrix& a) {
  if (a.n_block_rows() != a.n_block_cols())
    throw_error(ErrorCode::DimensionMismatch, "MDF ordering needs a square block structure");
}

MdfData prepare(const BlockCsrMatrix& a) {
  const std::size_t n = a.n_block_rows();
  const auto& p = a.pattern();
  MdfData d;
  d.col_nb.resize(n);
  d.row_nb.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const LuFactor lu = diag_factor(a, k);
    for (std::size_t pos = p.row_ptr[k]; pos < p.row_ptr[k + 1]; ++pos) {
      const std::size_t j = p.col_idx[pos];
      if (j == k) continue;
      d.row_nb[k].push_back({j, lu.left_divide(a.block(pos).to_dense())});
      d.col_nb[j].push_back({k, pos});
    }
  }
  return d;
}

double weight(const BlockCsrMatrix& a, const MdfData& d, std::size_t k, std::span<const char> eliminated) {
  double sum = 0.0;
  for (const auto& ce : d.col_nb[k]) {
    if (eliminated[ce.row]) continue;
    const DenseMatrix aik = a.block(ce.pos).to_dense();
    for (const auto& re : d.row_nb[k]) {
      if (eliminated[re.col] || re.col == ce.row || a.find(ce.row, re.col)) continue;
      const double f = (aik * re.x).frobenius_norm();
      sum += f * f;
    }
  }
  return std::sqrt(sum);
}

}  // namespace

MdfOrdering natural_ordering(std::size_t n) {
  MdfOrdering o;
  o.order.resize(n);
  std::iota(o.order.begin(), o.order.end(), std::size_t{0});
  o.weights_at_selection.assign(n, 0.0);
  return o;
}

double mdf_weight(const BlockCsrMatrix& a, std::size_t k, std::span<const char> eliminated) {
  require_square(a);
  require_same_size(eliminated.size(), a.n_block_rows(), "mdf_weight eliminated flags");
  const auto& p = a.pattern();
  const LuFactor lu = diag_factor(a, k);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.n_block_rows(); ++i) {
    if (i == k || eliminated[i]) continue;
    const auto pik = a.find(i, k);
    if (!pik) continue;
    const DenseMatrix aik = a.block(*pik).to_dense();
    for (std::size_t pos = p.row_ptr[k]; pos < p.row_ptr[k + 1]; ++pos) {
      const std::size_t j = p.col_idx[pos];
      if (j == k || j == i || eliminated[j] || a.find(i, j)) continue;
      const double f = (aik * lu.left_divide(a.block(pos).to_dense())).frobenius_norm();
      sum += f * f;
    }
  }
  return std::sqrt(sum);
}

MdfOrdering mdf_order(const BlockCsrMatrix& a) {
  require_square(a);
  const std::size_t n = a.n_block_rows();
  const MdfData d = prepare(a);
  std::vector<char> eliminated(n, 0);
  std::vector<double> w(n);
  std::set<std::pair<double, std::size_t>> queue;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = weight(a, d, k, eliminated);
    queue.emplace(w[k], k);
  }

  MdfOrdering o;
  o.order.reserve(n);
  o.weights_at_selection.reserve(n);
  std::vector<std::size_t> touched;
  while (!queue.empty()) {
    const auto [wk, k] = *queue.begin();
    queue.erase(queue.begin());
    eliminated[k] = 1;
    o.order.push_back(k);
    o.weights_at_selection.push_back(wk);

    touched.clear();
    for (const auto& ce : d.col_nb[k]) touched.push_back(ce.row);
    for (const auto& re : d.row_nb[k]) touched.push_back(re.col);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t m : touched) {
      if (eliminated[m]) continue;
      queue.erase({w[m], m});
      w[m] = weight(a, d, m, eliminated);
      queue.emplace(w[m], m);
    }
  }
  return o;
}

}  // namespace kktp
