#include "kktp/point_csr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "kktp/error.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

PointCsrMatrix::PointCsrMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), row_ptr_(n_rows + 1, 0) {}

PointCsrMatrix::PointCsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_ptr,
                               std::vector<std::size_t> col_idx, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  require_same_size(row_ptr_.size(), n_rows_ + 1, "PointCsrMatrix row_ptr");
  require_same_size(values_.size(), col_idx_.size(), "PointCsrMatrix values");
  if (row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size())
    throw_error(ErrorCode::InvalidArgument, "PointCsrMatrix row_ptr endpoints");
  for (std::size_t i = 0; i < n_rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw_error(ErrorCode::InvalidArgument, "row_ptr not monotone", i);
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= n_cols_) throw_error(ErrorCode::IndexOutOfRange, "column index", i);
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw_error(ErrorCode::InvalidArgument, "columns not strictly increasing", i);
    }
  }
}

PointCsrMatrix PointCsrMatrix::identity(std::size_t n) {
  std::vector<std::size_t> rp(n + 1), ci(n);
  std::iota(rp.begin(), rp.end(), std::size_t{0});
  std::iota(ci.begin(), ci.end(), std::size_t{0});
  return PointCsrMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

PointCsrMatrix PointCsrMatrix::from_dense(const DenseMatrix& d, double drop_tol) {
  std::vector<std::size_t> rp{0}, ci;
  std::vector<double> v;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (std::fabs(d(i, j)) > drop_tol) {
        ci.push_back(j);
        v.push_back(d(i, j));
      }
    }
    rp.push_back(ci.size());
  }
  return PointCsrMatrix(d.rows(), d.cols(), std::move(rp), std::move(ci), std::move(v));
}

std::optional<std::size_t> PointCsrMatrix::find(std::size_t i, std::size_t j) const {
  if (i >= n_rows_) return std::nullopt;
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - col_idx_.begin());
}

double PointCsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto k = find(i, j);
  return k ? values_[*k] : 0.0;
}

void PointCsrMatrix::matvec(std::span<const double> x, std::span<double> y) const {
  require_same_size(y.size(), n_rows_, "PointCsrMatrix::matvec output");
  std::fill(y.begin(), y.end(), 0.0);
  matvec_add(1.0, x, y);
}

std::vector<double> PointCsrMatrix::matvec(std::span<const double> x) const {
  std::vector<double> y(n_rows_);
  matvec(x, y);
  return y;
}

void PointCsrMatrix::matvec_add(double alpha, std::span<const double> x, std::span<double> y) const {
  require_same_size(x.size(), n_cols_, "PointCsrMatrix::matvec input");
  require_same_size(y.size(), n_rows_, "PointCsrMatrix::matvec output");
  for (std::size_t i = 0; i < n_rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] += alpha * s;
  }
}

void PointCsrMatrix::transpose_matvec(std::span<const double> x, std::span<double> y) const {
  require_same_size(x.size(), n_rows_, "PointCsrMatrix::transpose_matvec input");
  require_same_size(y.size(), n_cols_, "PointCsrMatrix::transpose_matvec output");
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * x[i];
}

std::vector<double> PointCsrMatrix::transpose_matvec(std::span<const double> x) const {
  std::vector<double> y(n_cols_);
  transpose_matvec(x, y);
  return y;
}

PointCsrMatrix PointCsrMatrix::transposed() const {
  std::vector<std::size_t> rp(n_cols_ + 1, 0);
  for (std::size_t c : col_idx_) ++rp[c + 1];
  std::partial_sum(rp.begin(), rp.end(), rp.begin());
  std::vector<std::size_t> next(rp.begin(), rp.end() - 1);
  std::vector<std::size_t> ci(nnz());
  std::vector<double> v(nnz());
  // Row-major traversal keeps each transposed row sorted.
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      ci[dst] = i;
      v[dst] = values_[k];
    }
  }
  return PointCsrMatrix(n_cols_, n_rows_, std::move(rp), std::move(ci), std::move(v));
}

DenseMatrix PointCsrMatrix::densify() const {
  DenseMatrix d(n_rows_, n_cols_);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

std::vector<double> PointCsrMatrix::diagonal() const {
  std::vector<double> d(std::min(n_rows_, n_cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

double PointCsrMatrix::frobenius_norm() const { return simd::norm2(values_); }

PointCsrMatrix assemble_point_csr(std::size_t n_rows, std::size_t n_cols, std::span<const Triplet> triplets) {
  std::vector<std::size_t> count(n_rows + 1, 0);
  for (std::size_t t = 0; t < triplets.size(); ++t) {
    const Triplet& tr = triplets[t];
    if (tr.row >= n_rows || tr.col >= n_cols)
      throw_error(ErrorCode::IndexOutOfRange,
                  "triplet (" + std::to_string(tr.row) + "," + std::to_string(tr.col) + ") outside " +
                      std::to_string(n_rows) + "x" + std::to_string(n_cols),
                  t);
    ++count[tr.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  // Bucket by row, then sort and merge duplicates within each row.
  std::vector<std::pair<std::size_t, double>> bucket(triplets.size());
  std::vector<std::size_t> next(count.begin(), count.end() - 1);
  for (const Triplet& tr : triplets) bucket[next[tr.row]++] = {tr.col, tr.value};

  std::vector<std::size_t> rp{0}, ci;
  std::vector<double> v;
  ci.reserve(triplets.size());
  v.reserve(triplets.size());
  for (std::size_t i = 0; i < n_rows; ++i) {
    auto first = bucket.begin() + static_cast<std::ptrdiff_t>(count[i]);
    auto last = bucket.begin() + static_cast<std::ptrdiff_t>(count[i + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (ci.size() > rp.back() && ci.back() == it->first) {
        v.back() += it->second;
      } else {
        ci.push_back(it->first);
        v.push_back(it->second);
      }
    }
    rp.push_back(ci.size());
  }
  return PointCsrMatrix(n_rows, n_cols, std::move(rp), std::move(ci), std::move(v));
}

PointCsrMatrix multiply(const PointCsrMatrix& a, const PointCsrMatrix& b) {
  if (a.cols() != b.rows()) throw_error(ErrorCode::DimensionMismatch, "sparse product inner dimension");
  // Gustavson row-by-row product with a dense accumulator.
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<char> used(b.cols(), 0);
  std::vector<std::size_t> cols;
  std::vector<std::size_t> rp{0}, ci;
  std::vector<double> v;
  const auto arp = a.row_ptr(), aci = a.col_idx(), brp = b.row_ptr(), bci = b.col_idx();
  const auto av = a.values(), bv = b.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cols.clear();
    for (std::size_t ka = arp[i]; ka < arp[i + 1]; ++ka) {
      const std::size_t m = aci[ka];
      for (std::size_t kb = brp[m]; kb < brp[m + 1]; ++kb) {
        const std::size_t j = bci[kb];
        if (!used[j]) {
          used[j] = 1;
          cols.push_back(j);
        }
        acc[j] += av[ka] * bv[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (std::size_t j : cols) {
      ci.push_back(j);
      v.push_back(acc[j]);
      acc[j] = 0.0;
      used[j] = 0;
    }
    rp.push_back(ci.size());
  }
  return PointCsrMatrix(a.rows(), b.cols(), std::move(rp), std::move(ci), std::move(v));
}

PointCsrMatrix add(double alpha, const PointCsrMatrix& a, double beta, const PointCsrMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw_error(ErrorCode::DimensionMismatch, "sparse sum shapes");
  std::vector<std::size_t> rp{0}, ci;
  std::vector<double> v;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t ka = a.row_ptr()[i], kb = b.row_ptr()[i];
    const std::size_t ea = a.row_ptr()[i + 1], eb = b.row_ptr()[i + 1];
    while (ka < ea || kb < eb) {
      const std::size_t ja = ka < ea ? a.col_idx()[ka] : SIZE_MAX;
      const std::size_t jb = kb < eb ? b.col_idx()[kb] : SIZE_MAX;
      if (ja == jb) {
        ci.push_back(ja);
        v.push_back(alpha * a.values()[ka++] + beta * b.values()[kb++]);
      } else if (ja < jb) {
        ci.push_back(ja);
        v.push_back(alpha * a.values()[ka++]);
      } else {
        ci.push_back(jb);
        v.push_back(beta * b.values()[kb++]);
      }
    }
    rp.push_back(ci.size());
  }
  return PointCsrMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(v));
}

namespace {

// Copies the upper triangle onto the lower one so the result is exactly symmetric.
PointCsrMatrix symmetrize_from_upper(const PointCsrMatrix& m) {
  std::vector<Triplet> t;
  t.reserve(m.nnz());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      const std::size_t j = m.col_idx()[k];
      if (j < i) continue;
      t.push_back({i, j, m.values()[k]});
      if (j != i) t.push_back({j, i, m.values()[k]});
    }
  }
  return assemble_point_csr(m.rows(), m.cols(), t);
}

}  // namespace

PointCsrMatrix gram(const PointCsrMatrix& a, std::span<const double> w) {
  PointCsrMatrix at = a.transposed();
  if (w.empty()) return symmetrize_from_upper(multiply(at, a));
  require_same_size(w.size(), a.rows(), "gram weights");
  PointCsrMatrix wa = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) wa.values()[k] *= w[i];
  return symmetrize_from_upper(multiply(at, wa));
}

PointCsrMatrix congruence(const PointCsrMatrix& a, const PointCsrMatrix& b) {
  if (b.rows() != b.cols() || b.cols() != a.rows()) throw_error(ErrorCode::DimensionMismatch, "congruence shapes");
  return symmetrize_from_upper(multiply(a.transposed(), multiply(b, a)));
}

PointCsrMatrix block_to_point(const BlockCsrMatrix& a) {
  const auto& p = a.pattern();
  std::vector<std::size_t> rp{0}, ci;
  std::vector<double> v;
  for (std::size_t I = 0; I < a.n_block_rows(); ++I) {
    for (std::size_t i = 0; i < a.row_size(I); ++i) {
      for (std::size_t k = p.row_ptr[I]; k < p.row_ptr[I + 1]; ++k) {
        const ConstBlockView b = a.block(k);
        const std::size_t c0 = a.col_offset(p.col_idx[k]);
        for (std::size_t j = 0; j < b.cols; ++j) {
          ci.push_back(c0 + j);
          v.push_back(b(i, j));
        }
      }
      rp.push_back(ci.size());
    }
  }
  return PointCsrMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(v));
}

BlockCsrMatrix point_to_block(const PointCsrMatrix& a, std::vector<std::size_t> row_block_sizes,
                              std::vector<std::size_t> col_block_sizes) {
  const auto row_off = block_offsets(row_block_sizes);
  const auto col_off = block_offsets(col_block_sizes);
  require_same_size(a.rows(), row_off.back(), "point_to_block rows");
  require_same_size(a.cols(), col_off.back(), "point_to_block cols");
  std::vector<std::size_t> col_block(a.cols());
  for (std::size_t J = 0; J < col_block_sizes.size(); ++J)
    for (std::size_t c = col_off[J]; c < col_off[J + 1]; ++c) col_block[c] = J;

  std::vector<std::vector<std::size_t>> cols(row_block_sizes.size());
  for (std::size_t I = 0; I < row_block_sizes.size(); ++I)
    for (std::size_t i = row_off[I]; i < row_off[I + 1]; ++i)
      for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) cols[I].push_back(col_block[a.col_idx()[k]]);

  BlockCsrMatrix m(BlockPattern::from_rows(std::move(row_block_sizes), std::move(col_block_sizes), std::move(cols)));
  for (std::size_t I = 0; I < m.n_block_rows(); ++I) {
    for (std::size_t i = row_off[I]; i < row_off[I + 1]; ++i) {
      for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
        const std::size_t c = a.col_idx()[k];
        const std::size_t J = col_block[c];
        m.block(*m.find(I, J))(i - row_off[I], c - col_off[J]) = a.values()[k];
      }
    }
  }
  return m;
}

}  // namespace kktp
