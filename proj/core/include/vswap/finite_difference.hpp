#ifndef VSWAP_FINITE_DIFFERENCE_HPP
#define VSWAP_FINITE_DIFFERENCE_HPP

#include <functional>
#include <limits>
#include <vector>

#include "vswap/errors.hpp"

namespace vswap {

// Fornberg weights: w[j] such that f^(order)(x0) ~= sum_j w[j] f(nodes[j]).
// Exact for polynomials of degree nodes.size()-1.
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes,
                               int order);

// One-sided stencil 0, -h, ..., -(order+2) h used for derivatives taken at
// omega = 0^- inside the admissible half line.
std::vector<double> left_stencil(int order, double h);

struct DerivativeResult {
  double value = 0.0;          // estimate at step h
  double refined_value = 0.0;  // estimate at step h/2
  double step_error = 0.0;     // |value - refined_value|
  double h = 0.0;
  std::vector<double> stencil;  // nodes used at step h
  std::vector<double> stencil_values;
};

// m-th one-sided derivative of g at 0^- using the nodes {0,-h,...,-(m+2)h},
// with a step-halving repeat as the truncation-error diagnostic.  When
// `min_abscissa` is given, nodes below it raise
// NumericalError(StencilOutsideAdmissibleRegion).
DerivativeResult derivative_at_zero_minus(
    const std::function<double(double)>& g, int order, double h,
    double min_abscissa = -std::numeric_limits<double>::infinity());

// m-th raw moment from cumulants via the complete Bell recursion:
// with L(0)=0 and kappa[k] = L^(k)(0) (k = 1..m, kappa[0] unused),
// returns d^m/dw^m exp(L(w)) at w = 0.
double raw_moment_from_cumulants(const std::vector<double>& kappa, int order);

}  // namespace vswap

#endif
