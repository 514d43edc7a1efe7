#ifndef VSWAP_EQUILIBRIUM_HPP
#define VSWAP_EQUILIBRIUM_HPP

#include <vector>

#include "vswap/levy_vg.hpp"
#include "vswap/params.hpp"

namespace vswap {

struct HjbSolution {
  double i = 0.0;
  double k = 0.0;
  double m = 0.0;
  double residual = 0.0;  // max-norm residual of the three equations
  int iterations = 0;
  // every distinct root the multistart found, as (I, K, M) triples
  std::vector<std::array<double, 3>> all_roots;
};

struct HjbOptions {
  GammaConvention gamma_convention = GammaConvention::Printed;
  double tol = 1e-12;
  int max_iterations = 80;
};

// Solves the three-equation constant system for (I, K, M) by damped Newton
// with e^{-(M + I theta + K beta)/vartheta} as an auxiliary unknown,
// multistarted on a 3x3x3 grid around the origin.  Among the roots found,
// the one reached by continuation from the jump-free system (kernel scaled
// 0 -> 1) is returned.  Throws NumericalError(NoRootFound) when every start
// diverges.
HjbSolution solve_hjb(const PhysicalParams& p, const RiskPrices& rp,
                      const VgParams& vg, const HjbOptions& opts = {});

// Equity premium phi = (vartheta - sigma rho I) V + int (e^x-1)(1-e^{-vt x}).
double equity_premium(double v, const RiskPrices& rp, const VgParams& vg,
                      double hjb_i, double rho, double sigma);

// E[phi](t) = vt [e^{-kappa t} V0 + theta (1 - e^{-kappa t})] + jump integral.
// Derived under rho = 0; throws ValidationError(PreconditionError) otherwise.
double expected_premium(double t, const PhysicalParams& p, const RiskPrices& rp,
                        const VgParams& vg);

}  // namespace vswap

#endif
