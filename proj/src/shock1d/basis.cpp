#include <cmath>
#include <numbers>

#include "kktp/error.hpp"
#include "kktp/shock1d.hpp"

namespace kktp::shock1d {

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw_error(ErrorCode::InvalidArgument, "Gauss rule needs at least one point");
  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const auto un = static_cast<unsigned>(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Newton on P_n from the standard Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double pn = std::legendre(un, x);
      const double pm = un > 0 ? std::legendre(un - 1, x) : 0.0;
      dp = static_cast<double>(n) * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double pn = std::legendre(un, x);
    const double pm = std::legendre(un - 1, x);
    dp = static_cast<double>(n) * (x * pn - pm) / (x * x - 1.0);
    // Store in increasing order.
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

LagrangeBasis::LagrangeBasis(std::size_t degree) : degree_(degree) {
  if (degree == 0) {
    nodes_ = {0.0};
  } else {
    nodes_.resize(degree + 1);
    for (std::size_t i = 0; i <= degree; ++i)
      nodes_[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(degree);
  }
  denom_.assign(nodes_.size(), 1.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t m = 0; m < nodes_.size(); ++m)
      if (m != i) denom_[i] *= nodes_[i] - nodes_[m];
}

void LagrangeBasis::eval(double xi, std::span<double> values) const {
  require_same_size(values.size(), size(), "Lagrange values");
  for (std::size_t i = 0; i < size(); ++i) {
    double num = 1.0;
    for (std::size_t m = 0; m < size(); ++m)
      if (m != i) num *= xi - nodes_[m];
    values[i] = num / denom_[i];
  }
}

void LagrangeBasis::eval_derivative(double xi, std::span<double> derivs) const {
  require_same_size(derivs.size(), size(), "Lagrange derivatives");
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i) continue;
      double prod = 1.0;
      for (std::size_t l = 0; l < n; ++l)
        if (l != i && l != m) prod *= xi - nodes_[l];
      sum += prod;
    }
    derivs[i] = sum / denom_[i];
  }
}

std::vector<double> LagrangeBasis::eval(double xi) const {
  std::vector<double> v(size());
  eval(xi, v);
  return v;
}

std::vector<double> LagrangeBasis::eval_derivative(double xi) const {
  std::vector<double> v(size());
  eval_derivative(xi, v);
  return v;
}

}  // namespace kktp::shock1d
