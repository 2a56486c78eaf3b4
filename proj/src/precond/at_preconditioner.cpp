#include <algorithm>
#include <array>

#include "kktp/constrained_precond.hpp"
#include "kktp/error.hpp"
#include "kktp/pmultigrid.hpp"
#include "kktp/simd/kernels.hpp"

namespace kktp {

void DenseLuTransposable::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "dense LU input");
  require_same_size(out.size(), dimension(), "dense LU output");
  std::copy(v.begin(), v.end(), out.begin());
  lu_.solve_in_place(out);
}

void DenseLuTransposable::apply_transpose_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "dense LU input");
  require_same_size(out.size(), dimension(), "dense LU output");
  std::copy(v.begin(), v.end(), out.begin());
  lu_.solve_transpose_in_place(out);
}

JuApprox::JuApprox(JuKind kind, std::unique_ptr<TransposablePreconditioner> impl)
    : kind_(kind), impl_(std::move(impl)) {
  if (!impl_) throw_error(ErrorCode::InvalidArgument, "JuApprox without implementation");
}

JuApprox JuApprox::build(JuKind kind, const BlockCsrMatrix& ju, std::size_t dense_cap) {
  switch (kind) {
    case JuKind::Exact:
      require_dense_cap(ju.rows(), dense_cap, "exact Ju solve");
      return JuApprox(kind, std::make_unique<DenseLuTransposable>(ju.densify()));
    case JuKind::BlockJacobi:
      return JuApprox(kind, std::make_unique<BlockJacobiPreconditioner>(build_block_jacobi(ju)));
    case JuKind::Bilu:
      return JuApprox(kind, std::make_unique<BiluPreconditioner>(bilu0_factor(ju, mdf_order(ju))));
  }
  throw_error(ErrorCode::InvalidArgument, "unknown Ju approximation");
}

ByyApprox::ByyApprox(ByyKind kind, std::unique_ptr<Preconditioner> impl) : kind_(kind), impl_(std::move(impl)) {
  if (!impl_) throw_error(ErrorCode::InvalidArgument, "ByyApprox without implementation");
}

ByyApprox ByyApprox::build(ByyKind kind, const PointCsrMatrix& byy, std::size_t dense_cap) {
  switch (kind) {
    case ByyKind::Exact:
      require_dense_cap(byy.rows(), dense_cap, "exact Byy solve");
      return ByyApprox(kind, std::make_unique<DenseLuPreconditioner>(byy.densify()));
    case ByyKind::PointJacobi:
      return ByyApprox(kind, std::make_unique<PointJacobi>(point_jacobi(byy)));
    case ByyKind::PointIlu0:
      return ByyApprox(kind, std::make_unique<PointIlu0>(point_ilu0_factor(byy)));
  }
  throw_error(ErrorCode::InvalidArgument, "unknown Byy approximation");
}

AtPreconditioner::AtPreconditioner(JuApprox ju, ByyApprox byy, PointCsrMatrix jy)
    : ju_(std::move(ju)), byy_(std::move(byy)), jy_(std::move(jy)), n_u_(jy_.rows()), n_y_(jy_.cols()) {
  require_same_size(ju_.dimension(), n_u_, "Ju approximation size");
  require_same_size(byy_.dimension(), n_y_, "Byy approximation size");
}

void AtPreconditioner::apply_inverse(std::span<const double> v, std::span<double> out) const {
  require_same_size(v.size(), dimension(), "anti-triangular input");
  require_same_size(out.size(), dimension(), "anti-triangular output");
  const auto v1 = v.subspan(0, n_u_), v2 = v.subspan(n_u_, n_y_), v3 = v.subspan(n_u_ + n_y_, n_u_);
  auto w3 = out.subspan(0, n_u_), w2 = out.subspan(n_u_, n_y_), w1 = out.subspan(n_u_ + n_y_, n_u_);

  std::vector<double> w1v(n_u_);
  ju_.solve_transpose(v1, w1v);
  std::vector<double> rhs2(v2.begin(), v2.end());
  const std::vector<double> t2 = jy_.transpose_matvec(w1v);
  simd::axpy(-1.0, t2, rhs2);
  std::vector<double> w2v(n_y_);
  byy_.solve(rhs2, w2v);
  std::vector<double> rhs3(v3.begin(), v3.end());
  jy_.matvec_add(-1.0, w2v, rhs3);
  ju_.solve(rhs3, w3);
  std::copy(w2v.begin(), w2v.end(), w2.begin());
  std::copy(w1v.begin(), w1v.end(), w1.begin());
}

namespace {

struct CatalogEntry {
  const char* name;
  AtVariant variant;
};

const std::array<CatalogEntry, 8>& catalog() {
  static const std::array<CatalogEntry, 8> c{{
      {"A0", {JuKind::Exact, ByyKind::Exact, false}},
      {"BJ", {JuKind::BlockJacobi, ByyKind::PointJacobi, false}},
      {"BILU", {JuKind::Bilu, ByyKind::PointJacobi, false}},
      {"BJ-ilu", {JuKind::BlockJacobi, ByyKind::PointIlu0, false}},
      {"BILU-ilu", {JuKind::Bilu, ByyKind::PointIlu0, false}},
      {"A0-p0", {JuKind::Exact, ByyKind::Exact, true}},
      {"BJ-p0", {JuKind::BlockJacobi, ByyKind::PointJacobi, true}},
      {"BILU-p0", {JuKind::Bilu, ByyKind::PointJacobi, true}},
  }};
  return c;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : catalog()) n.emplace_back(e.name);
    return n;
  }();
  return names;
}

AtVariant parse_variant(std::string_view name) {
  for (const auto& e : catalog())
    if (name == e.name) return e.variant;
  throw_error(ErrorCode::UnknownVariant, "unknown preconditioner '" + std::string(name) + "'");
}

std::string variant_name(const AtVariant& v) {
  for (const auto& e : catalog())
    if (e.variant == v) return e.name;
  // Combinations outside the catalog (for instance BILU with exact Byy).
  std::string s = v.ju == JuKind::Exact ? "exactJu" : v.ju == JuKind::BlockJacobi ? "BJ" : "BILU";
  s += v.byy == ByyKind::Exact ? "/exactByy" : v.byy == ByyKind::PointJacobi ? "/diag" : "/ilu";
  if (v.multigrid) s += "-p0";
  return s;
}

std::unique_ptr<AtPreconditioner> build_at_core(const KktSystem& sys, const AtVariant& variant,
                                                const AtBuildOptions& opts) {
  return std::make_unique<AtPreconditioner>(JuApprox::build(variant.ju, sys.factors.ju, opts.dense_cap),
                                            ByyApprox::build(variant.byy, sys.byy, opts.dense_cap), sys.factors.jy);
}

std::unique_ptr<Preconditioner> build_at_preconditioner(const KktSystem& sys, const AtVariant& variant,
                                                        const AtBuildOptions& opts) {
  std::unique_ptr<AtPreconditioner> core = build_at_core(sys, variant, opts);
  if (!variant.multigrid) return core;
  if (!sys.factors.layout)
    throw_error(ErrorCode::InvalidArgument, "p-multigrid variants need the discretization layout of the system");
  return std::make_unique<PmgPreconditioner>(sys, build_transfer(*sys.factors.layout), std::move(core), opts.dense_cap);
}

std::unique_ptr<Preconditioner> build_at_preconditioner(const KktSystem& sys, std::string_view name,
                                                        const AtBuildOptions& opts) {
  return build_at_preconditioner(sys, parse_variant(name), opts);
}

}  // namespace kktp
