#pragma once

// Random test instances built from the library's containers.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kktp/block_csr.hpp"
#include "kktp/kkt.hpp"
#include "kktp/point_csr.hpp"
#include "kktp/rng.hpp"
#include "kktp/shock1d.hpp"
#include "oracles.hpp"

namespace fixture {

inline kktp::DenseMatrix random_block(kktp::Rng& rng, std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
  kktp::DenseMatrix b(r, c);
  for (double& v : b.values()) v = rng.uniform(lo, hi);
  return b;
}

/// Diagonally dominant square block.
inline kktp::DenseMatrix dominant_block(kktp::Rng& rng, std::size_t n, double shift = 4.0) {
  kktp::DenseMatrix b = random_block(rng, n, n);
  for (std::size_t i = 0; i < n; ++i) b(i, i) += shift + static_cast<double>(n);
  return b;
}

/// Block tridiagonal (bandwidth 1) or block diagonal (bandwidth 0) square
/// matrix with the given block sizes and dominant diagonal blocks.
inline kktp::BlockCsrMatrix banded(kktp::Rng& rng, const std::vector<std::size_t>& sizes, std::size_t bandwidth = 1,
                                   double off_scale = 1.0) {
  kktp::BlockCsrBuilder b(sizes, sizes);
  const std::size_t n = sizes.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i >= bandwidth ? i - bandwidth : 0); j <= std::min(n - 1, i + bandwidth); ++j) {
      if (i == j) {
        b.add(i, j, dominant_block(rng, sizes[i]));
      } else {
        kktp::DenseMatrix blk = random_block(rng, sizes[i], sizes[j]);
        blk *= off_scale;
        b.add(i, j, blk);
      }
    }
  return b.build();
}

/// Random rectangular block matrix with a random pattern (each block kept
/// with the given probability).
inline kktp::BlockCsrMatrix random_rect(kktp::Rng& rng, const std::vector<std::size_t>& rs,
                                        const std::vector<std::size_t>& cs, double density) {
  kktp::BlockCsrBuilder b(rs, cs);
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (rng.uniform01() < density) b.add(i, j, random_block(rng, rs[i], cs[j]));
  return b.build();
}

inline kktp::PointCsrMatrix random_point(kktp::Rng& rng, std::size_t r, std::size_t c, double density) {
  std::vector<kktp::Triplet> t;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng.uniform01() < density) t.push_back({i, j, rng.uniform(-1.0, 1.0)});
  return kktp::assemble_point_csr(r, c, t);
}

/// Synthetic KKT factors with 1D shock-tracking shapes but random values.
/// With block_diagonal_ju the constraint Jacobian has no coupling blocks.
inline kktp::KktFactors random_factors(std::size_t n_elem, std::size_t p, std::size_t q, std::uint64_t seed,
                                       bool block_diagonal_ju = false, double kappa = 0.1, double gamma = 0.01) {
  kktp::Rng rng(seed);
  const std::size_t np = p + 1, npe = p + 2, nx = q * n_elem + 1;
  kktp::KktFactors f;
  f.ju = banded(rng, std::vector<std::size_t>(n_elem, np), block_diagonal_ju ? 0 : 1);
  {
    kktp::BlockCsrBuilder b(std::vector<std::size_t>(n_elem, npe), std::vector<std::size_t>(n_elem, np));
    for (std::size_t e = 0; e < n_elem; ++e)
      for (std::size_t j = (e ? e - 1 : 0); j <= std::min(n_elem - 1, e + 1); ++j) b.add(e, j, random_block(rng, npe, np));
    f.drdu = b.build();
  }
  auto mesh_rows = [&](std::size_t rows_per_elem) {
    kktp::BlockCsrBuilder b(std::vector<std::size_t>(n_elem, rows_per_elem), std::vector<std::size_t>(nx, 1));
    for (std::size_t e = 0; e < n_elem; ++e)
      for (std::size_t a = 0; a <= q; ++a) b.add(e, q * e + a, random_block(rng, rows_per_elem, 1));
    return b.build();
  };
  f.drdx = mesh_rows(npe);
  const kktp::BlockCsrMatrix small_drdx = mesh_rows(np);
  {
    std::vector<kktp::Triplet> t;
    for (std::size_t e = 0; e < n_elem; ++e) {
      const double s = rng.uniform(0.5, 2.0);
      t.push_back({e, q * e, -s});
      t.push_back({e, q * (e + 1), s});
    }
    f.drmshdx = kktp::assemble_point_csr(n_elem, nx, t);
  }
  {
    std::vector<kktp::Triplet> t;
    for (std::size_t j = 0; j + 2 < nx; ++j) t.push_back({j + 1, j, 1.0});
    f.dphidy = kktp::assemble_point_csr(nx, nx - 2, t);
  }
  f.d = kktp::shock1d::elasticity_D(kktp::shock1d::make_problem(n_elem, p, q));
  f.jy = kktp::multiply(kktp::block_to_point(small_drdx), f.dphidy);
  f.kappa = kappa;
  f.gamma = gamma;
  f.layout = kktp::Layout1d{n_elem, p, q};
  return f;
}

inline kktp::KktSystem random_system(std::size_t n_elem, std::size_t p, std::size_t q, std::uint64_t seed,
                                     bool block_diagonal_ju = false) {
  kktp::KktFactors f = random_factors(n_elem, p, q, seed, block_diagonal_ju);
  kktp::Rng rng(seed + 1000);
  const std::size_t nu = f.n_u(), ny = f.n_y();
  return kktp::make_kkt_system(std::move(f), rng.vector(nu + ny), rng.vector(nu));
}

/// Dense KKT matrix assembled from densified factors with oracle products.
inline oracle::Mat dense_kkt(const kktp::KktSystem& sys) {
  using namespace oracle;
  const auto& f = sys.factors;
  const Mat ju = from_block(f.ju), drdu = from_block(f.drdu), drdx = from_block(f.drdx);
  const Mat msh = from_point(f.drmshdx), dphi = from_point(f.dphidy), d = from_point(f.d), jy = from_point(f.jy);
  const Mat buu = matmul(transpose(drdu), drdu);
  const Mat buy = matmul(matmul(transpose(drdu), drdx), dphi);
  Mat bxx = matmul(transpose(drdx), drdx);
  bxx = add(bxx, matmul(transpose(msh), msh), f.kappa * f.kappa);
  bxx = add(bxx, d, f.gamma);
  const Mat byy = matmul(matmul(transpose(dphi), bxx), dphi);
  const std::size_t nu = f.n_u(), ny = f.n_y();
  Mat a = zeros(2 * nu + ny, 2 * nu + ny);
  place(a, buu, 0, 0);
  place(a, buy, 0, nu);
  place(a, transpose(ju), 0, nu + ny);
  place(a, transpose(buy), nu, 0);
  place(a, byy, nu, nu);
  place(a, transpose(jy), nu, nu + ny);
  place(a, ju, nu + ny, 0);
  place(a, jy, nu + ny, nu);
  return a;
}

}  // namespace fixture
