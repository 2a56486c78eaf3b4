#include <cmath>
#include <cstdlib>
#include <string_view>

#include "kktp/simd/kernels.hpp"

namespace kktp::simd {

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(KKTP_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable* const table = []() -> const KernelTable* {
    if (const char* env = std::getenv("KKTP_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
      return &scalar_kernels();
    }
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
  }();
  return *table;
}

double norm2(std::span<const double> a) noexcept {
  const double s = active().dot(a.data(), a.data(), a.size());
  if (std::isfinite(s) && s > 1e-280) return std::sqrt(s);
  // Overflow, underflow or non-finite input: rescale by the largest magnitude.
  double amax = 0.0;
  for (double v : a) {
    if (std::isnan(v)) return v;
    amax = std::fmax(amax, std::fabs(v));
  }
  if (amax == 0.0 || !std::isfinite(amax)) return amax;
  double acc = 0.0;
  for (double v : a) {
    const double t = v / amax;
    acc += t * t;
  }
  return amax * std::sqrt(acc);
}

}  // namespace kktp::simd
