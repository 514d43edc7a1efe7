#ifndef VSWAP_CIR_SQRT_MOMENTS_HPP
#define VSWAP_CIR_SQRT_MOMENTS_HPP

#include "vswap/errors.hpp"

namespace vswap {

// Constant-coefficient CIR process dY = kappa (theta - Y) dt
// + sigma sqrt(Y) dW for which moments of sqrt(Y_t) are needed.
struct CirMomentSpec {
  double kappa = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  double y0 = 0.0;

  // c(t) = sigma^2 (1 - e^{-kappa t}) / (4 kappa)
  double c(double t) const;
  // d = 4 kappa theta / sigma^2  (>= 2 under Feller)
  double d() const;
  // lambda(t) = 4 kappa e^{-kappa t} y0 / (sigma^2 (1 - e^{-kappa t}))
  double lambda(double t) const;
};

// E[sqrt(Y_t)] as the noncentral-chi-square series
//   sqrt(2 c) e^{-l/2} sum_k (l/2)^k / k! * G((1+d)/2 + k) / G(d/2 + k),
// summed two-sided from the Poisson mode in log space; for very large
// noncentrality the Poisson mixture is evaluated by Gauss-Hermite over its
// normal limit.  Throws NumericalError(SeriesNonConvergent) past the term
// budget.
double sqrt_mean_series(double t, const CirMomentSpec& s);

// Omega_1(t) = sqrt(c (lambda - 1) + c d + c d / (2 (d + lambda))).
// Throws NumericalError(NegativeRadicand) if the radicand is negative.
double sqrt_mean_approx(double t, const CirMomentSpec& s);

// Psi(t) = c(t) - c(t) d / (2 (d + lambda(t))),
// the variance approximation of sqrt(Y_t).
double sqrt_variance_approx(double t, const CirMomentSpec& s);

enum class BConvention {
  Difference,  // b = sqrt(y0) - a, so Omega_2(0) = sqrt(y0) exactly
  Printed,     // b = sqrt(y0 - a)
};

// Exponential fit Omega_2(t) = a + b e^{-ct} of the sqrt-mean curve.
struct ExpFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double value(double t) const;
};

// a = sqrt(theta - sigma^2 / (8 kappa)), b per convention,
// c = -ln(b^{-1} (Omega_1(1) - a)).  Throws
// NumericalError(FitDomainError) when theta <= sigma^2/(8 kappa), |b| is
// degenerate, or the log argument is non-positive.
ExpFit fit_exp_decay(const CirMomentSpec& s,
                     BConvention conv = BConvention::Difference);

// E[sqrt(V_t) sqrt(r_t)] ~= sigma eta rho23 sqrt(Psi PsiTilde) / 4
//                           + Omega_2 OmegaTilde_2.
double cross_moment(double t, const CirMomentSpec& spec_v,
                    const CirMomentSpec& spec_r, double rho23,
                    BConvention conv = BConvention::Difference);

}  // namespace vswap

#endif
