// AVX2/FMA kernel variants. Compiled with -mavx2 -mfma; reached only through
// the dispatch table after a CPU feature check.

#include <immintrin.h>

#include "kktp/simd/kernel_table.hpp"

namespace kktp::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_avx2(std::size_t rows, std::size_t cols, const double* a, const double* x, double* y) {
  if (cols < 4) {
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = a + i * cols;
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
      y[i] += s;
    }
    return;
  }
  for (std::size_t i = 0; i < rows; ++i) y[i] += dot_avx2(a + i * cols, x, cols);
}

void gemv_t_avx2(std::size_t rows, std::size_t cols, const double* a, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) axpy_avx2(x[i], a + i * cols, y, cols);
}

}  // namespace

const KernelTable* avx2_table_unchecked() noexcept {
  static const KernelTable table{Isa::Avx2, dot_avx2, axpy_avx2, gemv_avx2, gemv_t_avx2};
  return &table;
}

}  // namespace kktp::simd
