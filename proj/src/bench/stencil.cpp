#include "kktp/bench.hpp"
#include "kktp/error.hpp"
#include "kktp/rng.hpp"

namespace kktp::bench {

BlockCsrMatrix generate_stencil_system(std::size_t n, std::size_t b, std::uint64_t seed, int points) {
  if (n == 0 || b == 0) throw_error(ErrorCode::InvalidArgument, "stencil grid and block size must be positive");
  if (points != 5 && points != 9) throw_error(ErrorCode::InvalidArgument, "stencil must have 5 or 9 points");
  Rng rng(seed);
  const std::size_t nb = n * n;
  BlockCsrBuilder builder(std::vector<std::size_t>(nb, b), std::vector<std::size_t>(nb, b));
  // Rows in lexicographic grid order; neighbours visited in a fixed order so
  // the random stream, and hence the matrix, depends only on the seed.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (points == 5 && di != 0 && dj != 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di, jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(n) || jj >= static_cast<std::ptrdiff_t>(n)) continue;
          const std::size_t col = static_cast<std::size_t>(ii) * n + static_cast<std::size_t>(jj);
          DenseMatrix blk(b, b);
          for (double& v : blk.values()) v = rng.uniform(-0.5, 0.5);
          if (col == row) {
            for (std::size_t k = 0; k < b; ++k) blk(k, k) += static_cast<double>(b) + 2.0;
          } else {
            const double nrm = blk.frobenius_norm();
            blk *= nrm > 0.0 ? 0.25 / nrm : 0.0;
          }
          builder.add(row, col, blk);
        }
    }
  return builder.build();
}

}  // namespace kktp::bench
