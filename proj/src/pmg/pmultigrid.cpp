#include "kktp/pmultigrid.hpp"

#include "kktp/error.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {
namespace {

// Restriction of a mesh-coefficient map to the unpinned coordinates: drops the
// first and last row and column.
PointCsrMatrix interior_block(const PointCsrMatrix& m) {
  std::vector<Triplet> t;
  for (std::size_t i = 1; i + 1 < m.rows(); ++i)
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      const std::size_t j = m.col_idx()[k];
      if (j >= 1 && j + 1 < m.cols()) t.push_back({i - 1, j - 1, m.values()[k]});
    }
  return assemble_point_csr(m.rows() - 2, m.cols() - 2, t);
}

PointCsrMatrix block_diagonal(const std::vector<const PointCsrMatrix*>& parts) {
  std::size_t rows = 0, cols = 0;
  for (const auto* p : parts) {
    rows += p->rows();
    cols += p->cols();
  }
  std::vector<Triplet> t;
  std::size_t r0 = 0, c0 = 0;
  for (const auto* p : parts) {
    for (std::size_t i = 0; i < p->rows(); ++i)
      for (std::size_t k = p->row_ptr()[i]; k < p->row_ptr()[i + 1]; ++k)
        t.push_back({r0 + i, c0 + p->col_idx()[k], p->values()[k]});
    r0 += p->rows();
    c0 += p->cols();
  }
  return assemble_point_csr(rows, cols, t);
}

}  // namespace

TransferOps build_transfer(const Layout1d& layout) {
  if (layout.n_elem == 0) throw_error(ErrorCode::InvalidArgument, "layout has no elements");
  if (layout.q != 1 && layout.q != 2) throw_error(ErrorCode::InvalidArgument, "mesh degree must be 1 or 2");
  const std::size_t ne = layout.n_elem, np = layout.p + 1, q = layout.q;
  TransferOps t;
  t.fine = layout;

  std::vector<Triplet> pu;
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t i = 0; i < np; ++i) pu.push_back({e * np + i, e, 1.0});
  t.pu = assemble_point_csr(ne * np, ne, pu);

  // Fine node q*e + a sits at fraction a/q of element e: linear interpolation
  // of the two endpoint coefficients.
  const std::size_t nxf = q * ne + 1, nxc = ne + 1;
  std::vector<Triplet> py, qy;
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t a = (e == 0 ? 0 : 1); a <= q; ++a) {
      const double s = static_cast<double>(a) / static_cast<double>(q);
      if (1.0 - s != 0.0) py.push_back({q * e + a, e, 1.0 - s});
      if (s != 0.0) py.push_back({q * e + a, e + 1, s});
    }
  }
  for (std::size_t c = 0; c < nxc; ++c) qy.push_back({c, q * c, 1.0});
  t.py = assemble_point_csr(nxf, nxc, py);
  t.qy = assemble_point_csr(nxc, nxf, qy);
  t.py_free = interior_block(t.py);
  t.qy_free = interior_block(t.qy);

  const PointCsrMatrix put = t.pu.transposed();
  t.p = block_diagonal({&t.pu, &t.py_free, &t.pu});
  t.q = block_diagonal({&put, &t.qy_free, &put});
  return t;
}

CoarseSystem assemble_coarse(const LinearOperator& a, const TransferOps& t, std::size_t cap) {
  require_same_size(a.dimension(), t.fine_dimension(), "coarse assembly fine dimension");
  const std::size_t nc = t.coarse_dimension();
  require_dense_cap(nc, cap, "coarse matrix");
  CoarseSystem c;
  c.a0 = DenseMatrix(nc, nc);
  const PointCsrMatrix pt = t.p.transposed();  // row j of P^T is column j of P
  std::vector<double> pj(t.fine_dimension()), apj(t.fine_dimension()), col(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    std::fill(pj.begin(), pj.end(), 0.0);
    for (std::size_t k = pt.row_ptr()[j]; k < pt.row_ptr()[j + 1]; ++k) pj[pt.col_idx()[k]] = pt.values()[k];
    a.apply(pj, apj);
    t.q.matvec(apj, col);
    c.a0.set_column(j, col);
  }
  try {
    c.lu = dense_lu_factor(c.a0);
  } catch (const Error& e) {
    throw_error(ErrorCode::SingularCoarseMatrix, std::string("coarse matrix: ") + e.what());
  }
  return c;
}

void pmg_apply(const LinearOperator& a, const CoarseSystem& coarse, const TransferOps& t, const Preconditioner& smoother,
               std::span<const double> b, std::span<double> out) {
  const std::size_t n = t.fine_dimension();
  require_same_size(b.size(), n, "p-multigrid input");
  require_same_size(out.size(), n, "p-multigrid output");
  require_same_size(smoother.dimension(), n, "smoother dimension");
  std::vector<double> bc = t.q.matvec(b);
  coarse.lu.solve_in_place(bc);
  t.p.matvec(bc, out);
  std::vector<double> r = a.apply(out);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const std::vector<double> corr = smoother.apply_inverse(r);
  simd::axpy(1.0, corr, out);
}

PmgPreconditioner::PmgPreconditioner(const KktSystem& sys, TransferOps transfer,
                                     std::unique_ptr<Preconditioner> smoother, std::size_t cap)
    : op_(sys), transfer_(std::move(transfer)), smoother_(std::move(smoother)) {
  if (!smoother_) throw_error(ErrorCode::InvalidArgument, "p-multigrid needs a smoother");
  coarse_ = assemble_coarse(op_, transfer_, cap);
}

void PmgPreconditioner::apply_inverse(std::span<const double> v, std::span<double> out) const {
  pmg_apply(op_, coarse_, transfer_, *smoother_, v, out);
}

}  // namespace kktp
