#ifndef VSWAP_LEVY_VG_HPP
#define VSWAP_LEVY_VG_HPP

#include <functional>

#include "vswap/errors.hpp"

namespace vswap {

// Variance-gamma jump kernel: Brownian motion with drift `bm_drift` and
// volatility `bm_vol`, subordinated by a gamma clock with variance rate
// `clock_var`.
struct VgParams {
  double bm_drift = 0.0;  // v_G
  double bm_vol = 0.0;    // sigma_G (> 0)
  double clock_var = 0.0; // K (> 0)
};

// true iff E[e^{u X_1}] is finite, i.e. 1 - u vG K - u^2 sG^2 K / 2 > 0.
bool exponent_defined(double u, const VgParams& p);

// Decay rates of the kernel on the positive / negative half lines.
struct VgTails {
  double g_plus;
  double g_minus;
};
VgTails vg_tails(const VgParams& p);

// Jump intensity density: e^{-G+ x}/(K x) for x > 0 and e^{-G- |x|}/(K |x|)
// for x < 0.  Throws NumericalError(DomainError) at x = 0.
double kernel_density(double x, const VgParams& p);

// psi(u) = int (e^{ux} - 1) nu(dx) = -ln(1 - u vG K - u^2 sG^2 K/2) / K.
// Throws NumericalError(OutsideMomentDomain) outside the moment domain.
double char_exponent(double u, const VgParams& p);

// J(omega) = int [(e^{omega x} - 1) - omega (e^x - 1)] nu(dx)
//          = psi(omega) - omega psi(1).
double jump_term(double omega, const VgParams& p);

// int (e^x - 1)(1 - e^{-vartheta x}) nu(dx) = psi(1) - psi(1-vt) + psi(-vt).
// `kernel_scale` multiplies the kernel (used by the jump-intensity homotopy
// in the equilibrium solver).
double premium_jump_integral(double vartheta, const VgParams& p,
                             double kernel_scale = 1.0);

enum class GammaConvention {
  Printed,    // middle integrand e^{vartheta x}
  Corrected,  // middle integrand e^{-vartheta x}
};

// Gamma constant of the HJB system:
//   -delta - (1-vt) int (e^{(1-vt)x} - e^{vt x}) nu(dx)
//          + int (e^{(1-vt)x} - 1) nu(dx)
// The Corrected convention replaces e^{vt x} by e^{-vt x}.
double hjb_gamma(double vartheta, double delta, const VgParams& p,
                 GammaConvention conv = GammaConvention::Printed,
                 double kernel_scale = 1.0);

}  // namespace vswap

#endif
