#ifndef VSWAP_PARAMS_HPP
#define VSWAP_PARAMS_HPP

#include <optional>

#include "vswap/errors.hpp"
#include "vswap/levy_vg.hpp"

namespace vswap {

enum class CorrelationMode { Partial, Full };

// How the three Brownian drivers are tied together.  In the partial case a
// single rho couples the stock and its variance and the rate driver is
// independent; in the full case all three pairwise correlations are free
// (subject to the 3x3 matrix being PSD).
struct Correlations {
  CorrelationMode mode = CorrelationMode::Partial;
  double rho = 0.0;    // partial case: corr(stock, variance)
  double rho12 = 0.0;  // full case: corr(stock, variance)
  double rho13 = 0.0;  // full case: corr(stock, rate)
  double rho23 = 0.0;  // full case: corr(variance, rate)

  double stock_variance() const {
    return mode == CorrelationMode::Partial ? rho : rho12;
  }
};

// Coefficients of the three SDEs under the physical measure, plus the
// initial state.
struct PhysicalParams {
  double mu = 0.0;     // expected stock return (1/year)
  double kappa = 0.0;  // variance mean-reversion speed (1/year)
  double theta = 0.0;  // long-run variance
  double sigma = 0.0;  // vol of vol (1/sqrt(year))
  double alpha = 0.0;  // rate mean-reversion speed (1/year)
  double beta = 0.0;   // long-run rate (1/year)
  double eta = 0.0;    // rate volatility
  Correlations corr;
  double s0 = 1.0;
  double v0 = 0.0;
  double r0 = 0.0;
};

// Slopes of the volatility / rate risk premiums, risk aversion and the HJB
// constants they feed.  I is produced by the equilibrium module and is only
// needed for the partial-correlation measure change.
struct RiskPrices {
  double lambda1 = 0.0;  // volatility premium slope
  double lambda2 = 0.0;  // rate premium slope
  double vartheta = 2.0; // relative risk aversion (>0, != 1)
  double delta = 0.03;   // time discount (>0)
  double hjb_i = 0.0;
  double hjb_k = 0.0;
  double hjb_m = 0.0;
};

struct RiskNeutralParams {
  double kappa = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  Correlations corr;
  double s0 = 1.0;
  double v0 = 0.0;
  double r0 = 0.0;
  VgParams vg;
};

// Starred coefficients under the T-forward measure.  The values equal the
// risk-neutral ones; the -B(t,T) eta^2 r drift adjustment is time dependent
// and lives in the bond / MGF / MC modules, never here.
struct ForwardParams {
  double kappa = 0.0;  // kappa*
  double theta = 0.0;  // theta*
  double sigma = 0.0;
  double alpha = 0.0;  // alpha*
  double beta = 0.0;   // beta*
  double eta = 0.0;
  Correlations corr;
  double s0 = 1.0;
  double v0 = 0.0;
  double r0 = 0.0;
  double maturity = 0.0;  // T of the numeraire bond (years)
  VgParams vg;            // jump kernel under Q^T
};

// Throws ValidationError (FellerViolation / CorrelationOutOfRange /
// NonPositiveInitialState) when a constraint fails; otherwise returns the
// input unchanged.  Validated values are treated as immutable afterwards.
// `require_feller = false` lets the variance process touch zero, which the
// equity-premium experiments need; every pricing path validates strictly.
PhysicalParams validate(const PhysicalParams& p, bool require_feller = true);
RiskNeutralParams validate(const RiskNeutralParams& q);
ForwardParams validate(const ForwardParams& f);

// Measure change P -> Q.  Partial mode applies
//   kappa^Q = kappa + rho sigma (vartheta - sigma rho I) + lambda1 sqrt(1-rho^2)
// while full mode uses the Heston-style kappa^Q = kappa + lambda1.  Both
// preserve the products kappa theta and alpha beta exactly.
RiskNeutralParams to_risk_neutral(const PhysicalParams& p, const RiskPrices& rp,
                                  const VgParams& vg, CorrelationMode mode);

// Measure change Q -> Q^T: starred coefficients equal the Q ones, only the
// maturity of the numeraire bond is attached.
ForwardParams to_forward(const RiskNeutralParams& q, double maturity);

}  // namespace vswap

#endif
