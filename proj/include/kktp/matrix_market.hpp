#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kktp/block_csr.hpp"
#include "kktp/point_csr.hpp"

namespace kktp {

// Matrix Market coordinate/array I/O. Values are printed with 17 significant
// digits so a write/read round trip is bit-exact. Block matrices are written as
// point matrices (every stored block entry, zeros included) preceded by
//   %%block-sizes rows=<comma list> cols=<comma list>
// which other Matrix Market readers treat as an ordinary comment.

struct MatrixMarketFile {
  PointCsrMatrix matrix;
  std::optional<std::vector<std::size_t>> row_block_sizes;
  std::optional<std::vector<std::size_t>> col_block_sizes;
};

void write_matrix_market(std::ostream& os, const PointCsrMatrix& a);
void write_matrix_market(std::ostream& os, const BlockCsrMatrix& a);
MatrixMarketFile read_matrix_market(std::istream& is);

void write_matrix_market(const std::filesystem::path& path, const PointCsrMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const BlockCsrMatrix& a);
MatrixMarketFile read_matrix_market(const std::filesystem::path& path);
PointCsrMatrix read_point_matrix(const std::filesystem::path& path);
/// Requires the block-size header line.
BlockCsrMatrix read_block_matrix(const std::filesystem::path& path);

/// Dense column vector in array format.
void write_vector(const std::filesystem::path& path, const std::vector<double>& v);
std::vector<double> read_vector(const std::filesystem::path& path);
void write_vector(std::ostream& os, const std::vector<double>& v);
std::vector<double> read_vector(std::istream& is);

}  // namespace kktp
