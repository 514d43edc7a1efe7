#ifndef VSWAP_CIR_BOND_HPP
#define VSWAP_CIR_BOND_HPP

#include "vswap/params.hpp"

namespace vswap {

// A(t,T) and B(t,T) of the CIR zero-coupon bond P(t,T) = A e^{-B r}.
struct BondCoefficients {
  double a = 1.0;  // dimensionless, in (0,1] for t <= T
  double b = 0.0;  // years, >= 0
};

// gamma = sqrt(alpha^2 + 2 eta^2)
double cir_gamma(double alpha, double eta);

// B(t,T) as a function of the window tau = T - t:
//   B = 2 (e^{g tau} - 1) / (2 g + (alpha + g)(e^{g tau} - 1)),
// evaluated in a form that stays finite for large g tau.  Solves
// dB/dtau = 1 - alpha B - eta^2 B^2 / 2 with B(0) = 0.
double bond_b(double t, double maturity, const ForwardParams& p);

// A(t,T) with the exponent grouping e^{(alpha+g) tau / 2}; ln A is formed
// first so the 2 alpha beta / eta^2 power survives small eta.  For eta below
// 1e-8 the deterministic-rate limit e^{-beta (tau - B)} is returned.
double bond_a(double t, double maturity, const ForwardParams& p);

BondCoefficients bond_coefficients(double t, double maturity,
                                   const ForwardParams& p);

// A(t,T) e^{-B(t,T) r}; strictly decreasing in r.
double bond_price(double t, double maturity, double r, const ForwardParams& p);

}  // namespace vswap

#endif
