#ifndef VSWAP_SWAP_PRICER_HPP
#define VSWAP_SWAP_PRICER_HPP

#include <vector>

#include "vswap/affine_mgf.hpp"
#include "vswap/cir_sqrt_moments.hpp"
#include "vswap/finite_difference.hpp"
#include "vswap/params.hpp"

namespace vswap {

// A discretely sampled moment swap: realized sum of m-th powers of log
// returns over the grid, times the notional.  m = 2 is the variance swap.
struct SwapContract {
  double maturity = 1.0;
  int samples = 252;
  double notional = 1.0;
  int moment_order = 2;
  // strictly increasing, t_0 = 0, t_N = maturity; empty means uniform
  std::vector<double> grid;

  std::vector<double> sampling_times() const;  // validated, size samples+1
};

SwapContract validate(const SwapContract& c);

struct PricerOptions {
  LegOptions leg{};
  double fd_step = 1e-4;  // omega step of the one-sided stencil
  // convention of the exponential sqrt-mean fit feeding the
  // full-correlation cross-moment curve
  BConvention b_convention = BConvention::Difference;
};

// MGF of one sampling period:  E^T[ e^{omega (X_{t_i} - X_{t_{i-1}})} ],
// assembled from the inner leg over [t_{i-1}, t_i] with terminal
// (omega,0,0,0) and the outer leg over [0, t_{i-1}] with terminal
// (0, C1, D1, E1).  i is 1-based.
double period_mgf(int i, double omega, const SwapContract& c,
                  const ForwardParams& p, const PricerOptions& opts = {});

struct StrikeResult {
  double strike = 0.0;
  std::vector<double> contributions;  // per period, strike = NA * sum
  double fd_step = 0.0;
  double max_step_error = 0.0;  // worst step-halving change across periods
};

// Fair strike  K = NA * sum_i d^m/dw^m period_mgf(i, w) |_{w=0^-}.
// The omega derivative is taken on the log of the period MGF over the
// one-sided stencil and recombined through the cumulant/Bell identity,
// which is exact and avoids differencing numbers near 1.
StrikeResult fair_strike(const SwapContract& c, const ForwardParams& p,
                         const PricerOptions& opts = {});

// Continuous-sampling reference
//   NA * [theta* + (V0 - theta*)(1 - e^{-k T})/(k T)] * T
//   (+ NA * T * int x^2 nu(dx) when jumps are included),
// with the second jump moment taken from psi''(0) = vG^2 K + sG^2.
double continuous_limit_reference(const SwapContract& c, const ForwardParams& p,
                                  bool with_jumps = true);

}  // namespace vswap

#endif
