// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every tolerance is pinned here; the Monte Carlo runs use fixed seeds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "vswap/cir_bond.hpp"
#include "vswap/cir_sqrt_moments.hpp"
#include "vswap/equilibrium.hpp"
#include "vswap/mc_engine.hpp"
#include "vswap/ode.hpp"
#include "vswap/rng.hpp"
#include "vswap/swap_pricer.hpp"
#include "vswap/vg_quadrature.hpp"

using namespace vswap;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

ForwardParams desk(double maturity = 1.0) {
  ForwardParams p;
  p.kappa = 2.0;
  p.theta = 0.05;
  p.sigma = 0.1;
  p.alpha = 1.2;
  p.beta = 0.05;
  p.eta = 0.01;
  p.corr.rho = -0.40;
  p.s0 = 1.0;
  p.v0 = 0.05;
  p.r0 = 0.05;
  p.maturity = maturity;
  p.vg = {0.001, 0.001, 0.01};
  return p;
}

SwapContract contract(int n, double maturity = 1.0) {
  SwapContract c;
  c.maturity = maturity;
  c.samples = n;
  c.notional = 1.0;
  c.moment_order = 2;
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void criterion_1_strike_vs_mc() {
  const ForwardParams p = desk();
  const SwapContract c = contract(252);

  auto t0 = std::chrono::steady_clock::now();
  const StrikeResult analytic = fair_strike(c, p);
  const double t_analytic = seconds_since(t0);

  SimConfig cfg;
  cfg.paths = 200000;
  cfg.steps_per_year = 1008;  // four steps per sampling period
  cfg.seed = 101;
  t0 = std::chrono::steady_clock::now();
  const McEstimate mc = mc_fair_strike(c, p, cfg);
  const double t_mc = seconds_since(t0);

  const double rel = std::abs(mc.mean - analytic.strike) / analytic.strike;
  const double bound = std::max(0.01, 3.0 * mc.stderr_ / analytic.strike);
  const bool ok = rel <= bound && t_analytic < 5.0 && t_mc < 180.0;
  report(1, ok, "analytic vs MC fair strike, N=252",
         "analytic=" + fmt(analytic.strike) + " mc=" + fmt(mc.mean) +
             " rel=" + fmt(rel) + " bound=" + fmt(bound) + " t_analytic=" +
             fmt(t_analytic) + "s t_mc=" + fmt(t_mc) + "s");
}

void criterion_2_sampling_convergence() {
  const ForwardParams p = desk();
  std::vector<int> ns{4, 12, 52, 252, 1000};
  std::vector<double> strikes;
  for (int n : ns) strikes.push_back(fair_strike(contract(n), p).strike);
  bool decreasing = true;
  for (std::size_t i = 1; i < strikes.size(); ++i)
    if (!(strikes[i] < strikes[i - 1])) decreasing = false;

  const double k2000 = fair_strike(contract(2000), p).strike;
  const double limit = continuous_limit_reference(contract(2000), p);
  const double rel = std::abs(k2000 - limit) / limit;
  const bool ok = decreasing && rel <= 0.01;
  report(2, ok, "strike decreasing in N, converging to the continuous limit",
         "K(4..1000)=" + fmt(strikes[0]) + ">" + fmt(strikes[1]) + ">" +
             fmt(strikes[2]) + ">" + fmt(strikes[3]) + ">" + fmt(strikes[4]) +
             " K(2000)=" + fmt(k2000) + " limit=" + fmt(limit) +
             " rel=" + fmt(rel));
}

void criterion_3_beta_monotonicity() {
  std::vector<double> strikes;
  for (double beta : {0.03, 0.05, 0.07}) {
    ForwardParams p = desk();
    p.beta = beta;
    strikes.push_back(fair_strike(contract(252), p).strike);
  }
  const bool ok = strikes[0] < strikes[1] && strikes[1] < strikes[2];
  report(3, ok, "strike increasing in the long-run rate",
         fmt(strikes[0]) + " < " + fmt(strikes[1]) + " < " + fmt(strikes[2]));
}

void criterion_4_premium_monotonicity() {
  PhysicalParams p;
  p.mu = 0.1;
  p.kappa = 0.3;
  p.theta = 0.05;
  p.sigma = 0.2;
  p.alpha = 1.2;
  p.beta = 0.05;
  p.eta = 0.01;
  p.corr.rho = 0.0;
  p.s0 = 1.0;
  p.v0 = 0.035;
  p.r0 = 0.05;
  const VgParams vg{0.02, 0.04, 0.01};
  bool ok = true;
  for (int j = 0; j <= 100; ++j) {
    const double t = 5.0 * j / 100.0;
    double prev = -1e300;
    for (double vt : {1.5, 2.0, 3.0}) {
      RiskPrices rp;
      rp.vartheta = vt;
      rp.delta = 0.05;
      const double cur = expected_premium(t, p, rp, vg);
      if (!(cur > prev)) ok = false;
      prev = cur;
    }
  }
  report(4, ok, "expected premium pointwise increasing in risk aversion",
         "vartheta in {1.5, 2, 3} on t in [0, 5]");
}

void criterion_5_bond_oracle() {
  const ForwardParams p = desk();

  SimConfig cfg;
  cfg.paths = 100000;
  cfg.steps_per_year = 500;
  cfg.seed = 105;
  cfg.measure = McMeasure::RiskNeutral;
  PathFunctional discount = [](const PathObservation& o) {
    return std::exp(-o.integral_r);
  };
  const McEstimate mc = mc_run(p, cfg, {0.0, 1.0}, {discount}).front();
  const double analytic = bond_price(0.0, 1.0, p.r0, p);
  const double rel = std::abs(mc.mean - analytic) / analytic;

  // closed-form B vs its Riccati over tau in [0, 30]
  ForwardParams p30 = desk(30.0);
  ode::Options oo;
  oo.rel_tol = 1e-12;
  oo.abs_tol = 1e-14;
  oo.store_dense = true;
  auto rhs = [&p30](double, const ode::State<1>& y, ode::State<1>& dy) {
    dy[0] = 1.0 - p30.alpha * y[0] - 0.5 * p30.eta * p30.eta * y[0] * y[0];
  };
  const auto sol = ode::integrate<1>(rhs, 0.0, 30.0, {0.0}, oo);
  double worst_b = 0.0;
  for (int k = 0; k <= 300; ++k) {
    const double tau = 30.0 * k / 300.0;
    const double closed = bond_b(30.0 - tau, 30.0, p30);
    const double from_ode = tau == 0.0 ? 0.0 : sol.at(tau)[0];
    worst_b = std::max(worst_b, std::abs(closed - from_ode));
  }

  const bool ok = rel <= 0.002 && worst_b <= 1e-10;
  report(5, ok, "bond price vs MC discounting; closed B vs its Riccati",
         "rel=" + fmt(rel) + " (tol 0.002), max|dB|=" + fmt(worst_b) +
             " (tol 1e-10)");
}

void criterion_6_riccati_integrity() {
  const ForwardParams p = desk();
  LegOptions tight;
  tight.ode.rel_tol = 1e-12;
  tight.ode.abs_tol = 1e-14;

  // closed-form variance loading vs direct integration
  double worst_c = 0.0;
  for (double omega : {-1.5, -0.5, -0.1, 0.0}) {
    for (double varphi : {0.0, -0.4}) {
      ode::Options oo = tight.ode;
      auto rhs = [&](double, const ode::State<1>& y, ode::State<1>& dy) {
        dy[0] = 0.5 * p.sigma * p.sigma * y[0] * y[0] +
                (p.corr.rho * p.sigma * omega - p.kappa) * y[0] +
                0.5 * (omega * omega - omega);
      };
      const double from_ode =
          ode::integrate<1>(rhs, 0.0, 1.0, {varphi}, oo).y[0];
      worst_c = std::max(
          worst_c, std::abs(v_load_closed(1.0, omega, varphi, p) - from_ode));
    }
  }

  // the two rate-loading routes on random admissible tuples
  std::uint64_t sm = 424242;
  auto u = [&] { return static_cast<double>(splitmix64(sm) >> 11) * 0x1.0p-53; };
  double worst_d = 0.0;
  double worst_defect = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ForwardParams q = desk();
    q.kappa = 0.5 + 2.5 * u();
    q.theta = 0.02 + 0.08 * u();
    q.sigma = 0.8 * std::sqrt(2.0 * q.kappa * q.theta) * u();
    q.alpha = 0.3 + 2.0 * u();
    q.beta = 0.02 + 0.08 * u();
    q.eta = 0.8 * std::sqrt(2.0 * q.alpha * q.beta) * u();
    q.maturity = 0.5 + 2.0 * u();
    const double omega = -2.0 * u();
    const double psi = -u();
    const LegSolution leg =
        solve_leg(0.0, q.maturity, {omega, 0.0, psi, 0.0}, q, tight);
    const FgCheck fg = fg_cross_check(0.0, q.maturity, omega, psi, q, tight);
    worst_d = std::max(worst_d, std::abs(fg.r_load - leg.start.r_load));
    worst_defect = std::max(worst_defect, leg.max_residual);
  }

  const bool ok = worst_c <= 1e-10 && worst_d <= 1e-8 && worst_defect <= 1e-8;
  report(6, ok, "Riccati integrity across routes",
         "max|dC|=" + fmt(worst_c) + " (tol 1e-10), max|dD|=" + fmt(worst_d) +
             " (tol 1e-8), max defect=" + fmt(worst_defect) + " (tol 1e-8)");
}

void criterion_7_levy_integrals() {
  const VgParams vg{0.02, 0.04, 0.01};
  const double vt = 2.0, delta = 0.05;

  auto rel_err = [](double a, double b) {
    return std::abs(a - b) / (1.0 + std::abs(a));
  };

  const double psi1 = char_exponent(1.0, vg);
  const double q_psi =
      levy_integral([](double x) { return std::expm1(x); }, vg);

  const double j = jump_term(-0.5, vg);
  const double q_j = levy_integral(
      [](double x) { return std::expm1(-0.5 * x) + 0.5 * std::expm1(x); }, vg);

  const double prem = premium_jump_integral(vt, vg);
  const double q_prem = levy_integral(
      [vt](double x) { return -std::expm1(x) * std::expm1(-vt * x); }, vg);

  const double gamma = hjb_gamma(vt, delta, vg);
  const double q_gamma =
      -delta -
      (1.0 - vt) * levy_integral(
                       [vt](double x) {
                         return std::expm1((1.0 - vt) * x) - std::expm1(vt * x);
                       },
                       vg) +
      levy_integral([vt](double x) { return std::expm1((1.0 - vt) * x); }, vg);

  const double worst = std::max({rel_err(psi1, q_psi), rel_err(j, q_j),
                                 rel_err(prem, q_prem),
                                 rel_err(gamma, q_gamma)});
  report(7, worst <= 1e-8, "Levy integrals vs the quadrature oracle",
         "worst rel=" + fmt(worst) + " (tol 1e-8)");
}

void criterion_8_moment_approximations() {
  ForwardParams p = desk();
  p.corr.mode = CorrelationMode::Full;
  p.corr.rho12 = 0.0;
  p.corr.rho13 = 0.0;
  p.corr.rho23 = 0.3;
  SimConfig cfg;
  cfg.paths = 200000;
  cfg.steps_per_year = 504;
  cfg.seed = 108;
  cfg.measure = McMeasure::RiskNeutral;

  PathFunctional sqrt_v = [](const PathObservation& o) {
    return std::sqrt(o.v.back());
  };
  PathFunctional sqrt_vr = [](const PathObservation& o) {
    return std::sqrt(o.v.back() * o.r.back());
  };
  const auto est = mc_run(p, cfg, {0.0, 1.0}, {sqrt_v, sqrt_vr});

  const CirMomentSpec spec_v{p.kappa, p.theta, p.sigma, p.v0};
  const CirMomentSpec spec_r{p.alpha, p.beta, p.eta, p.r0};
  const double series = sqrt_mean_series(1.0, spec_v);
  const double rel_series = std::abs(est[0].mean - series) / series;

  double worst_omega1 = 0.0;
  for (double t = 0.1; t <= 5.0; t += 0.05) {
    const double exact = sqrt_mean_series(t, spec_v);
    worst_omega1 = std::max(
        worst_omega1, std::abs(sqrt_mean_approx(t, spec_v) - exact) / exact);
  }

  const double cross = cross_moment(1.0, spec_v, spec_r, p.corr.rho23);
  const double rel_cross = std::abs(est[1].mean - cross) / cross;

  const bool ok = rel_series <= 0.002 && worst_omega1 <= 0.01 &&
                  rel_cross <= 0.02;
  report(8, ok, "sqrt-moment curves vs MC and their approximations",
         "series rel=" + fmt(rel_series) + " (tol 0.002), omega1 worst=" +
             fmt(worst_omega1) + " (tol 0.01), cross rel=" + fmt(rel_cross) +
             " (tol 0.02)");
}

void criterion_9_deterministic_strike() {
  ForwardParams p = desk();
  p.sigma = 1e-12;
  p.eta = 1e-12;
  p.vg = {1e-12, 1e-12, 1e-12};
  const SwapContract c = contract(4);
  const double expected = 4.0 * std::pow(0.025 * 0.25, 2.0);  // 1.5625e-4

  PricerOptions po;
  po.leg.drift_only = true;
  const double analytic = fair_strike(c, p, po).strike;

  SimConfig cfg;
  cfg.paths = 1000;
  cfg.steps_per_year = 96;
  cfg.seed = 109;
  cfg.randomness_off = true;
  const McEstimate mc = mc_fair_strike(c, p, cfg);

  const bool ok = std::abs(analytic - expected) <= 1e-6 * expected &&
                  std::abs(mc.mean - expected) <= 1e-6 * expected &&
                  mc.stderr_ == 0.0;
  report(9, ok, "drift-only configuration reproduces the deterministic strike",
         "analytic=" + fmt(analytic) + " mc=" + fmt(mc.mean) + " expected=" +
             fmt(expected) + " mc stderr=" + fmt(mc.stderr_));
}

void criterion_10_hjb_residuals() {
  PhysicalParams p;
  p.mu = 0.1;
  p.kappa = 0.3;
  p.theta = 0.05;
  p.sigma = 0.2;
  p.alpha = 1.2;
  p.beta = 0.05;
  p.eta = 0.01;
  p.corr.rho = 0.0;
  p.s0 = 1.0;
  p.v0 = 0.035;
  p.r0 = 0.05;
  const VgParams vg{0.02, 0.04, 0.01};

  double worst_res = 0.0;
  double worst_agree = 0.0;
  bool ok = true;
  for (double vt : {0.5, 2.0, 3.0}) {
    RiskPrices rp;
    rp.vartheta = vt;
    rp.delta = 0.05;
    try {
      const HjbSolution s = solve_hjb(p, rp, vg);
      worst_res = std::max(worst_res, s.residual);
      for (const auto& r : s.all_roots) {
        const double dist = std::abs(r[0] - s.i) + std::abs(r[1] - s.k) +
                            std::abs(r[2] - s.m);
        if (dist < 1e-4) worst_agree = std::max(worst_agree, dist);
      }
    } catch (const Error& e) {
      ok = false;
    }
  }
  ok = ok && worst_res <= 1e-10 && worst_agree <= 1e-8;
  report(10, ok, "HJB residuals and multistart agreement",
         "max residual=" + fmt(worst_res) +
             " (tol 1e-10), basin agreement=" + fmt(worst_agree) +
             " (tol 1e-8)");
}

}  // namespace

int main() {
  std::printf("acceptance suite: desk parameters, fixed seeds\n");
  criterion_1_strike_vs_mc();
  criterion_2_sampling_convergence();
  criterion_3_beta_monotonicity();
  criterion_4_premium_monotonicity();
  criterion_5_bond_oracle();
  criterion_6_riccati_integrity();
  criterion_7_levy_integrals();
  criterion_8_moment_approximations();
  criterion_9_deterministic_strike();
  criterion_10_hjb_residuals();
  if (failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
