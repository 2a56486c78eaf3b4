#pragma once

#include <cstddef>

namespace kktp::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y += A x, A row-major rows x cols
  void (*gemv)(std::size_t rows, std::size_t cols, const double* a, const double* x, double* y);
  /// y += A^T x, A row-major rows x cols
  void (*gemv_t)(std::size_t rows, std::size_t cols, const double* a, const double* x, double* y);
};

// Defined in the AVX2 translation unit. Only this header may be included there:
// anything inline pulled into that TU would be compiled for AVX2.
const KernelTable* avx2_table_unchecked() noexcept;

}  // namespace kktp::simd
