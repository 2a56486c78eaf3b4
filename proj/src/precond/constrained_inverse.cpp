#include "kktp/constrained_precond.hpp"
#include "kktp/error.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

std::vector<double> generic_constrained_inverse(const DenseMatrix& g, const DenseMatrix& j, std::span<const double> v) {
  const std::size_t n = g.rows(), m = j.rows();
  if (!g.square()) throw_error(ErrorCode::DimensionMismatch, "G must be square");
  require_same_size(j.cols(), n, "constraint matrix columns");
  require_same_size(v.size(), n + m, "constrained inverse input");

  const LuFactor g_lu = dense_lu_factor(g);
  // S = J G^{-1} J^T
  const DenseMatrix ginv_jt = g_lu.left_divide(j.transposed());
  const DenseMatrix s = j * ginv_jt;
  LuFactor s_lu;
  try {
    s_lu = dense_lu_factor(s);
  } catch (const Error& e) {
    throw_error(ErrorCode::SingularSchurComplement, std::string("Schur complement: ") + e.what());
  }

  // a = G^{-1} v1;  S w2 = J a - v2;  w1 = a - G^{-1} J^T w2
  const std::vector<double> a = g_lu.solve(v.subspan(0, n));
  std::vector<double> w2 = j.multiply(a);
  simd::axpy(-1.0, v.subspan(n, m), w2);
  s_lu.solve_in_place(w2);
  std::vector<double> out(a);
  std::vector<double> corr(n);
  ginv_jt.multiply(w2, corr);
  simd::axpy(-1.0, corr, std::span<double>(out).first(n));
  out.insert(out.end(), w2.begin(), w2.end());
  return out;
}

}  // namespace kktp
