#include "vswap/finite_difference.hpp"

#include <cmath>
#include <limits>

namespace vswap {

// Fornberg (1988) recurrence, weights for all orders up to `order`, keeping
// only the requested one.
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes,
                               int order) {
  const int n = static_cast<int>(nodes.size());
  if (order < 0 || order >= n)
    throw ValidationError(ErrorCode::PreconditionError,
                          "fd_weights: need more nodes than derivative order");
  const int m = order;
  std::vector<std::vector<double>> c(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> left_stencil(int order, double h) {
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(order) + 3);
  for (int j = 0; j <= order + 2; ++j) nodes.push_back(-h * j);
  return nodes;
}

DerivativeResult derivative_at_zero_minus(
    const std::function<double(double)>& g, int order, double h,
    double min_abscissa) {
  if (order < 1 || !(h > 0.0))
    throw ValidationError(ErrorCode::PreconditionError,
                          "derivative_at_zero_minus: order >= 1 and h > 0");
  if (-h * (order + 2) < min_abscissa)
    throw NumericalError(
        ErrorCode::StencilOutsideAdmissibleRegion,
        "stencil leaves the admissible omega interval; reduce h");

  auto estimate = [&](double step, std::vector<double>* keep_nodes,
                      std::vector<double>* keep_values) {
    const std::vector<double> nodes = left_stencil(order, step);
    const std::vector<double> w = fd_weights(0.0, nodes, order);
    std::vector<double> vals(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) vals[j] = g(nodes[j]);
    // weights of any derivative of order >= 1 annihilate constants; applying
    // them to g - g(0) makes that cancellation exact instead of roundoff-bound
    double acc = 0.0;
    for (std::size_t j = 1; j < nodes.size(); ++j)
      acc += w[j] * (vals[j] - vals[0]);
    if (keep_nodes) *keep_nodes = nodes;
    if (keep_values) *keep_values = std::move(vals);
    return acc;
  };

  DerivativeResult out;
  out.h = h;
  out.value = estimate(h, &out.stencil, &out.stencil_values);
  out.refined_value = estimate(0.5 * h, nullptr, nullptr);
  out.step_error = std::abs(out.value - out.refined_value);
  return out;
}

double raw_moment_from_cumulants(const std::vector<double>& kappa, int order) {
  if (order < 0 || static_cast<int>(kappa.size()) <= order)
    throw ValidationError(ErrorCode::PreconditionError,
                          "raw_moment_from_cumulants: need kappa[1..order]");
  // m_n = sum_{j=0}^{n-1} C(n-1, j) kappa_{n-j} m_j, m_0 = 1
  std::vector<double> m(static_cast<std::size_t>(order) + 1, 0.0);
  m[0] = 1.0;
  for (int n = 1; n <= order; ++n) {
    double binom = 1.0;  // C(n-1, 0)
    double acc = 0.0;
    for (int j = 0; j <= n - 1; ++j) {
      acc += binom * kappa[static_cast<std::size_t>(n - j)] *
             m[static_cast<std::size_t>(j)];
      binom *= static_cast<double>(n - 1 - j) / static_cast<double>(j + 1);
    }
    m[static_cast<std::size_t>(n)] = acc;
  }
  return m[static_cast<std::size_t>(order)];
}

}  // namespace vswap
