#ifndef VSWAP_AFFINE_MGF_HPP
#define VSWAP_AFFINE_MGF_HPP

#include <functional>

#include "vswap/cir_bond.hpp"
#include "vswap/ode.hpp"
#include "vswap/params.hpp"

namespace vswap {

// Whether a leg over [t0, t1] sees the bond coefficient at the true absolute
// time (Absolute) or restarted at the leg end as the nested-expectation
// notation suggests (PaperLiteral).
enum class Nesting { Absolute, PaperLiteral };

// Quadratic coefficient of the rate-loading Riccati: eta^2/2 is what the
// PIDE diffusion term implies; EtaPrinted keeps eta/2 for comparison.
enum class DQuadratic { Eta2, EtaPrinted };

struct LegOptions {
  Nesting nesting = Nesting::Absolute;
  DQuadratic d_quadratic = DQuadratic::Eta2;
  // drop every diffusion- and jump-sourced term, keeping drifts only (the
  // all-randomness-off configuration)
  bool drift_only = false;
  // E[sqrt(V_t) sqrt(r_t)] as a function of absolute time; required in the
  // full-correlation mode, ignored otherwise
  std::function<double(double)> cross_moment;
  ode::Options ode{};
};

// Loadings of exp(omega X + v_load V + r_load r + level).
struct AffineCoefficients {
  double omega = 0.0;
  double v_load = 0.0;
  double r_load = 0.0;
  double level = 0.0;
};

struct LegSolution {
  AffineCoefficients start;  // coefficients at the window start t0
  long ode_steps = 0;
  double max_residual = 0.0;  // ODE defect sampled at interior points
};

// Lower end of the admissible omega interval, (sigma - sqrt(sigma^2 +
// 4 kappa^2)) / (2 sigma); -inf as sigma -> 0.
double admissible_omega_min(const ForwardParams& p);

// Closed form of the variance loading with
//   zeta = sqrt((kappa - rho sigma w)^2 + sigma^2 (w - w^2)),
//   xi_pm = zeta -+ (kappa - rho sigma w).
// Throws NumericalError(InadmissibleExponent) when zeta^2 < 0.
double v_load_closed(double tau, double omega, double varphi,
                     const ForwardParams& p);

// Integral of the closed-form variance loading, kappa* theta* int_0^tau C;
// kept as a test oracle for the level ODE.
double v_load_closed_integral(double tau, double omega, double varphi,
                              const ForwardParams& p);

// Integrates the coefficient system backward in absolute time from t1 to t0
// with the given terminal values.  The rate-loading equation sees the bond
// coefficient at the absolute time (or the paper-literal clock, per
// options), and the full-correlation mode adds the cross-moment terms to the
// level equation.
LegSolution solve_leg(double t0, double t1, const AffineCoefficients& terminal,
                      const ForwardParams& p, const LegOptions& opts = {});

// Fixed-grid counterpart of solve_leg: the same coefficient system advanced
// by `steps` equal Runge-Kutta steps, so the map terminal -> start is a
// smooth function of omega.  The pricer differentiates through this.
AffineCoefficients solve_leg_fixed(double t0, double t1,
                                   const AffineCoefficients& terminal,
                                   const ForwardParams& p,
                                   const LegOptions& opts, long steps);

struct FgCheck {
  double f = 1.0;
  double g = 0.0;
  double r_load = 0.0;  // -G/F
};

// Independent linear-system route to the rate loading: integrates the 2x2
// system with ratio -G/F solving the same Riccati as solve_leg's r_load,
// started from (F,G)(0) = (1, -psi).  Throws
// NumericalError(SingularLinearSystem) if |F| falls below 1e-14.
FgCheck fg_cross_check(double t0, double t1, double omega, double psi,
                       const ForwardParams& p, const LegOptions& opts = {});

// exp(omega X + v_load V + r_load r + level); throws
// NumericalError(Overflow) when the exponent leaves the representable range.
double mgf_value(const AffineCoefficients& c, double x, double v, double r);

}  // namespace vswap

#endif
