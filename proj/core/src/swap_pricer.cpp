#include "vswap/swap_pricer.hpp"

#include <algorithm>
#include <cmath>

#include "vswap/cir_sqrt_moments.hpp"

namespace vswap {

namespace {

// target Runge-Kutta step density (years) for the fixed-grid leg solves
constexpr double kLegStep = 0.01;
constexpr long kMinLegSteps = 8;

long leg_steps(double span) {
  return std::max(kMinLegSteps, static_cast<long>(std::ceil(span / kLegStep)));
}

LegOptions with_cross_moment(const LegOptions& in, const ForwardParams& p,
                             BConvention conv) {
  LegOptions opts = in;
  if (p.corr.mode == CorrelationMode::Full && !opts.cross_moment &&
      !opts.drift_only) {
    const CirMomentSpec spec_v{p.kappa, p.theta, p.sigma, p.v0};
    const CirMomentSpec spec_r{p.alpha, p.beta, p.eta, p.r0};
    const ExpFit fit_v = fit_exp_decay(spec_v, conv);
    const ExpFit fit_r = fit_exp_decay(spec_r, conv);
    const double rho23 = p.corr.rho23;
    const double sig_prod = 0.25 * p.sigma * p.eta * rho23;
    opts.cross_moment = [=](double t) {
      const double tc = std::max(t, 1e-8);
      return sig_prod * std::sqrt(sqrt_variance_approx(tc, spec_v) *
                                  sqrt_variance_approx(tc, spec_r)) +
             fit_v.value(tc) * fit_r.value(tc);
    };
  }
  return opts;
}

// ln E^T[e^{omega (X_{t_i} - X_{t_{i-1}})}] through the fixed-grid legs
double log_period_mgf_fixed(const std::vector<double>& times, int i,
                            double omega, const ForwardParams& p,
                            const LegOptions& opts) {
  const double t_prev = times[static_cast<std::size_t>(i) - 1];
  const double t_cur = times[static_cast<std::size_t>(i)];
  const AffineCoefficients inner = solve_leg_fixed(
      t_prev, t_cur, {omega, 0.0, 0.0, 0.0}, p, opts, leg_steps(t_cur - t_prev));
  AffineCoefficients outer{0.0, inner.v_load, inner.r_load, inner.level};
  if (t_prev > 0.0)
    outer = solve_leg_fixed(0.0, t_prev, outer, p, opts, leg_steps(t_prev));
  return outer.v_load * p.v0 + outer.r_load * p.r0 + outer.level;
}

// cumulants of the period log return from the one-sided stencil, combined
// into the m-th raw moment
double period_moment(const std::vector<double>& times, int i, int order,
                     double h, const ForwardParams& p, const LegOptions& opts) {
  const std::vector<double> nodes = left_stencil(order, h);
  std::vector<double> lvals(nodes.size(), 0.0);
  for (std::size_t j = 1; j < nodes.size(); ++j)  // L(0) = 0 exactly
    lvals[j] = log_period_mgf_fixed(times, i, nodes[j], p, opts);
  std::vector<double> kappa(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 1; k <= order; ++k) {
    const std::vector<double> w = fd_weights(0.0, nodes, k);
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += w[j] * lvals[j];
    kappa[static_cast<std::size_t>(k)] = acc;
  }
  return raw_moment_from_cumulants(kappa, order);
}

}  // namespace

std::vector<double> SwapContract::sampling_times() const {
  if (!grid.empty()) return grid;
  std::vector<double> t(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i)
    t[static_cast<std::size_t>(i)] =
        maturity * static_cast<double>(i) / static_cast<double>(samples);
  return t;
}

SwapContract validate(const SwapContract& c) {
  if (!(c.maturity > 0.0))
    throw ValidationError(ErrorCode::InvalidWindow, "contract maturity must be > 0");
  if (c.samples < 1)
    throw ValidationError(ErrorCode::PreconditionError,
                          "contract needs at least one sampling period");
  if (c.moment_order < 1 || c.moment_order > 8)
    throw ValidationError(ErrorCode::PreconditionError,
                          "moment order must lie in [1, 8]");
  if (!std::isfinite(c.notional))
    throw ValidationError(ErrorCode::ConfigError, "notional must be finite");
  if (!c.grid.empty()) {
    if (static_cast<int>(c.grid.size()) != c.samples + 1)
      throw ValidationError(ErrorCode::GridMismatch,
                            "grid size must equal samples + 1");
    if (c.grid.front() != 0.0 ||
        std::abs(c.grid.back() - c.maturity) > 1e-12)
      throw ValidationError(ErrorCode::GridMismatch,
                            "grid must start at 0 and end at the maturity");
    for (std::size_t i = 1; i < c.grid.size(); ++i)
      if (!(c.grid[i] > c.grid[i - 1]))
        throw ValidationError(ErrorCode::GridMismatch,
                              "grid must be strictly increasing");
  }
  return c;
}

double period_mgf(int i, double omega, const SwapContract& c,
                  const ForwardParams& p, const PricerOptions& opts) {
  const SwapContract vc = validate(c);
  if (i < 1 || i > vc.samples)
    throw ValidationError(ErrorCode::PreconditionError,
                          "period index out of range");
  const std::vector<double> times = vc.sampling_times();
  const LegOptions leg = with_cross_moment(opts.leg, p, opts.b_convention);
  const double t_prev = times[static_cast<std::size_t>(i) - 1];
  const double t_cur = times[static_cast<std::size_t>(i)];
  const LegSolution inner =
      solve_leg(t_prev, t_cur, {omega, 0.0, 0.0, 0.0}, p, leg);
  AffineCoefficients outer{0.0, inner.start.v_load, inner.start.r_load,
                           inner.start.level};
  if (t_prev > 0.0) outer = solve_leg(0.0, t_prev, outer, p, leg).start;
  return mgf_value(outer, 0.0, p.v0, p.r0);
}

StrikeResult fair_strike(const SwapContract& c, const ForwardParams& p,
                         const PricerOptions& opts) {
  const SwapContract vc = validate(c);
  const ForwardParams vp = validate(p);
  const int m = vc.moment_order;
  const double h = opts.fd_step;
  if (!(h > 0.0))
    throw ValidationError(ErrorCode::PreconditionError, "fd_step must be > 0");
  if (-h * (m + 2) <= admissible_omega_min(vp))
    throw NumericalError(ErrorCode::StencilOutsideAdmissibleRegion,
                         "fair_strike: omega stencil leaves admissible region");

  const std::vector<double> times = vc.sampling_times();
  const LegOptions leg = with_cross_moment(opts.leg, vp, opts.b_convention);

  StrikeResult out;
  out.fd_step = h;
  out.contributions.resize(static_cast<std::size_t>(vc.samples));
  double total = 0.0;
  for (int i = 1; i <= vc.samples; ++i) {
    const double coarse = period_moment(times, i, m, h, vp, leg);
    const double fine = period_moment(times, i, m, 0.5 * h, vp, leg);
    out.contributions[static_cast<std::size_t>(i) - 1] = fine;
    total += fine;
    const double denom = std::max(std::abs(fine), 1e-300);
    out.max_step_error =
        std::max(out.max_step_error, std::abs(fine - coarse) / denom);
  }
  out.strike = vc.notional * total;
  return out;
}

double continuous_limit_reference(const SwapContract& c, const ForwardParams& p,
                                  bool with_jumps) {
  const SwapContract vc = validate(c);
  const ForwardParams vp = validate(p);
  const double T = vc.maturity;
  const double decay = -std::expm1(-vp.kappa * T) / (vp.kappa * T);
  double value = (vp.theta + (vp.v0 - vp.theta) * decay) * T;
  if (with_jumps) {
    const double second_moment =
        vp.vg.bm_drift * vp.vg.bm_drift * vp.vg.clock_var +
        vp.vg.bm_vol * vp.vg.bm_vol;
    value += T * second_moment;
  }
  return vc.notional * value;
}

}  // namespace vswap
