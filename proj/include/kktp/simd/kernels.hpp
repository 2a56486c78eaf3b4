#pragma once

// Data-parallel inner loops shared by the dense-block, sparse and Krylov code.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2/FMA variant is compiled into a separate translation unit and chosen at
// first use when the CPU reports both features. Setting KKTP_SIMD=scalar in the
// environment pins the scalar table.

#include <cstddef>
#include <span>

#include "kktp/simd/kernel_table.hpp"

namespace kktp::simd {

const char* to_string(Isa isa) noexcept;

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// Table selected for this process. Fixed after the first call.
const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double norm2(std::span<const double> a) noexcept;

inline void gemv(std::size_t rows, std::size_t cols, const double* a, const double* x, double* y) noexcept {
  active().gemv(rows, cols, a, x, y);
}

inline void gemv_t(std::size_t rows, std::size_t cols, const double* a, const double* x, double* y) noexcept {
  active().gemv_t(rows, cols, a, x, y);
}

}  // namespace kktp::simd
