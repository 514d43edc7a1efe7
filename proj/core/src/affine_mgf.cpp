#include "vswap/affine_mgf.hpp"

#include <cmath>

namespace vswap {

namespace {

void check_omega(double omega, const ForwardParams& p) {
  const double lo = admissible_omega_min(p);
  if (!(omega <= 0.0) || !(omega > lo))
    throw NumericalError(ErrorCode::InadmissibleExponent,
                         "omega outside the admissible interval (lo, 0]");
}

void check_leg_window(double t0, double t1, const ForwardParams& p) {
  if (!(0.0 <= t0 && t0 <= t1 && t1 <= p.maturity + 1e-12))
    throw ValidationError(ErrorCode::InvalidWindow,
                          "leg window must satisfy 0 <= t0 <= t1 <= T");
}

struct LegCoefficients {
  double q_c = 0.0;      // quadratic coefficient of the variance loading
  double lin_c = 0.0;    // linear coefficient of the variance loading
  double force_c = 0.0;  // constant forcing of the variance loading
  double q_d = 0.0;      // quadratic coefficient of the rate loading
  double jump = 0.0;     // J(omega), constant along the leg
  bool full = false;
  double rho13_term = 0.0;  // rho13 eta omega
  double rho23_term = 0.0;  // rho23 sigma eta
};

LegCoefficients make_coefficients(double omega, const ForwardParams& p,
                                  const LegOptions& opts) {
  LegCoefficients c;
  if (opts.drift_only) {
    c.lin_c = -p.kappa;
    c.force_c = -0.5 * omega;
    return c;
  }
  const double rho_sv = p.corr.stock_variance();
  c.q_c = 0.5 * p.sigma * p.sigma;
  c.lin_c = rho_sv * p.sigma * omega - p.kappa;
  c.force_c = 0.5 * (omega * omega - omega);
  c.q_d = opts.d_quadratic == DQuadratic::Eta2 ? 0.5 * p.eta * p.eta
                                               : 0.5 * p.eta;
  c.jump = jump_term(omega, p.vg);
  if (p.corr.mode == CorrelationMode::Full) {
    c.full = true;
    c.rho13_term = p.corr.rho13 * p.eta * omega;
    c.rho23_term = p.corr.rho23 * p.sigma * p.eta;
  }
  return c;
}

// RHS of the coefficient system in the leg clock s (time from the leg end
// t1 backwards): state (C, D, E).
ode::Rhs<3> make_leg_rhs(double omega, double t1, const ForwardParams& p,
                         const LegOptions& opts) {
  const LegCoefficients c = make_coefficients(omega, p, opts);
  const double T = p.maturity;
  const double alpha = p.alpha;
  const double eta2 = p.eta * p.eta;
  const double kt = p.kappa * p.theta;
  const double ab = p.alpha * p.beta;
  const bool absolute = opts.nesting == Nesting::Absolute;
  const bool drift_only = opts.drift_only;
  if (c.full && !opts.cross_moment)
    throw ValidationError(ErrorCode::PreconditionError,
                          "full-correlation legs need a cross-moment curve");
  auto cross = opts.cross_moment;
  const ForwardParams params = p;

  return [=](double s, const ode::State<3>& y, ode::State<3>& dy) {
    const double C = y[0], D = y[1];
    double b_tau = 0.0;
    double tau = 0.0;
    if (!drift_only) {
      tau = absolute ? (T - t1 + s) : s;
      if (tau > T) tau = T;  // round-off guard at the outermost window
      b_tau = bond_b(T - tau, T, params);
    }
    dy[0] = c.q_c * C * C + c.lin_c * C + c.force_c;
    dy[1] = c.q_d * D * D - (alpha + (drift_only ? 0.0 : b_tau * eta2)) * D +
            omega;
    double de = kt * C + ab * D + c.jump;
    if (c.full) {
      // the numeraire drift contributes -B and the cross diffusion +D, for
      // both the stock-rate and variance-rate couplings
      const double e_vr = cross(T - tau);
      de += (c.rho13_term + c.rho23_term * C) * e_vr * (D - b_tau);
    }
    dy[2] = de;
  };
}

}  // namespace

double admissible_omega_min(const ForwardParams& p) {
  if (p.sigma < 1e-14) return -std::numeric_limits<double>::infinity();
  return (p.sigma - std::sqrt(p.sigma * p.sigma + 4.0 * p.kappa * p.kappa)) /
         (2.0 * p.sigma);
}

double v_load_closed(double tau, double omega, double varphi,
                     const ForwardParams& p) {
  if (tau < 0.0)
    throw ValidationError(ErrorCode::InvalidWindow, "v_load_closed: tau >= 0");
  const double rho_sv = p.corr.stock_variance();
  const double k = p.kappa - rho_sv * p.sigma * omega;
  const double zeta2 = k * k + p.sigma * p.sigma * (omega - omega * omega);
  if (zeta2 < 0.0)
    throw NumericalError(ErrorCode::InadmissibleExponent,
                         "v_load_closed: zeta^2 < 0");
  const double zeta = std::sqrt(zeta2);
  const double xi_p = zeta - k;
  const double xi_m = zeta + k;
  const double s2 = p.sigma * p.sigma;
  const double eq = std::exp(-zeta * tau);
  const double num = varphi * (xi_m * eq + xi_p) +
                     (omega * omega - omega) * (1.0 - eq);
  const double den = (xi_p + varphi * s2) * eq + xi_m - varphi * s2;
  if (std::abs(den) < 1e-300)
    throw NumericalError(ErrorCode::Overflow, "v_load_closed: degenerate denominator");
  return num / den;
}

double v_load_closed_integral(double tau, double omega, double varphi,
                              const ForwardParams& p) {
  const double kt = p.kappa * p.theta;
  if (p.sigma < 1e-12) {
    // linear equation: C' = -kappa C + (omega^2 - omega)/2
    const double f = 0.5 * (omega * omega - omega);
    const double decay = -std::expm1(-p.kappa * tau) / p.kappa;
    return kt * (varphi * decay + (f / p.kappa) * (tau - decay));
  }
  const double rho_sv = p.corr.stock_variance();
  const double k = p.kappa - rho_sv * p.sigma * omega;
  const double zeta2 = k * k + p.sigma * p.sigma * (omega - omega * omega);
  if (zeta2 < 0.0)
    throw NumericalError(ErrorCode::InadmissibleExponent,
                         "v_load_closed_integral: zeta^2 < 0");
  const double zeta = std::sqrt(zeta2);
  const double xi_p = zeta - k;
  const double xi_m = zeta + k;
  const double s2 = p.sigma * p.sigma;
  const double eq = std::exp(-zeta * tau);
  const double den = (xi_p + varphi * s2) * eq + xi_m - varphi * s2;
  return -(2.0 * kt / s2) *
         (0.5 * xi_p * tau + std::log(den / (2.0 * zeta)));
}

LegSolution solve_leg(double t0, double t1, const AffineCoefficients& terminal,
                      const ForwardParams& p, const LegOptions& opts) {
  check_leg_window(t0, t1, p);
  check_omega(terminal.omega, p);
  LegSolution out;
  out.start = terminal;
  const double span = t1 - t0;
  if (span == 0.0) return out;

  auto rhs = make_leg_rhs(terminal.omega, t1, p, opts);
  ode::Options oo = opts.ode;
  oo.store_dense = true;
  ode::Solution<3> sol = ode::integrate<3>(
      rhs, 0.0, span, {terminal.v_load, terminal.r_load, terminal.level}, oo);
  out.start.v_load = sol.y[0];
  out.start.r_load = sol.y[1];
  out.start.level = sol.y[2];
  out.ode_steps = sol.steps;

  // defect of the interpolated trajectory at interior points
  double worst = 0.0;
  const int samples = 20;
  for (int j = 1; j <= samples; ++j) {
    const double s = span * static_cast<double>(j) / (samples + 1);
    const ode::State<3> y = sol.at(s);
    const ode::State<3> dy = sol.derivative_at(s);
    ode::State<3> f;
    rhs(s, y, f);
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::abs(dy[i] - f[i]) / (1.0 + std::abs(y[i])));
  }
  out.max_residual = worst;
  return out;
}

AffineCoefficients solve_leg_fixed(double t0, double t1,
                                   const AffineCoefficients& terminal,
                                   const ForwardParams& p,
                                   const LegOptions& opts, long steps) {
  check_leg_window(t0, t1, p);
  check_omega(terminal.omega, p);
  const double span = t1 - t0;
  if (span == 0.0 || steps <= 0) return terminal;
  auto rhs = make_leg_rhs(terminal.omega, t1, p, opts);
  const ode::State<3> y = ode::integrate_fixed<3>(
      rhs, 0.0, span, {terminal.v_load, terminal.r_load, terminal.level},
      steps);
  return {terminal.omega, y[0], y[1], y[2]};
}

FgCheck fg_cross_check(double t0, double t1, double omega, double psi,
                       const ForwardParams& p, const LegOptions& opts) {
  check_leg_window(t0, t1, p);
  check_omega(omega, p);
  const double span = t1 - t0;
  if (span == 0.0) return {1.0, -psi, psi};

  const double q_d = opts.drift_only
                         ? 0.0
                         : (opts.d_quadratic == DQuadratic::Eta2
                                ? 0.5 * p.eta * p.eta
                                : 0.5 * p.eta);
  const double T = p.maturity;
  const bool absolute = opts.nesting == Nesting::Absolute;
  const ForwardParams params = p;
  const bool drift_only = opts.drift_only;
  ode::Rhs<2> rhs = [=](double s, const ode::State<2>& y, ode::State<2>& dy) {
    double a = params.alpha;
    if (!drift_only) {
      double tau = absolute ? (T - t1 + s) : s;
      if (tau > T) tau = T;
      a += bond_b(T - tau, T, params) * params.eta * params.eta;
    }
    // ratio -G/F solves the same Riccati as the rate loading
    dy[0] = 0.5 * a * y[0] + q_d * y[1];
    dy[1] = -omega * y[0] - 0.5 * a * y[1];
  };
  const ode::Solution<2> sol =
      ode::integrate<2>(rhs, 0.0, span, {1.0, -psi}, opts.ode);
  if (std::abs(sol.y[0]) < 1e-14)
    throw NumericalError(ErrorCode::SingularLinearSystem,
                         "fg_cross_check: F vanished");
  return {sol.y[0], sol.y[1], -sol.y[1] / sol.y[0]};
}

double mgf_value(const AffineCoefficients& c, double x, double v, double r) {
  const double expo = c.omega * x + c.v_load * v + c.r_load * r + c.level;
  if (!std::isfinite(expo) || expo > 709.0)
    throw NumericalError(ErrorCode::Overflow,
                         "mgf_value: exponent outside representable range");
  return std::exp(expo);
}

}  // namespace vswap
