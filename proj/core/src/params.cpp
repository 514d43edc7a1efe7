#include "vswap/params.hpp"

#include <cmath>
#include <sstream>

namespace vswap {

namespace {

constexpr double kPsdTol = 1e-12;

void check_correlations(const Correlations& c) {
  auto in_range = [](double r) { return r >= -1.0 && r <= 1.0; };
  if (c.mode == CorrelationMode::Partial) {
    if (!in_range(c.rho))
      throw ValidationError(ErrorCode::CorrelationOutOfRange,
                            "rho outside [-1, 1]");
    return;
  }
  for (double r : {c.rho12, c.rho13, c.rho23})
    if (!in_range(r))
      throw ValidationError(ErrorCode::CorrelationOutOfRange,
                            "pairwise correlation outside [-1, 1]");
  // 3x3 correlation matrix PSD <=> det >= 0 given unit diagonal and
  // |rho_ij| <= 1
  const double det = 1.0 + 2.0 * c.rho12 * c.rho13 * c.rho23 -
                     c.rho12 * c.rho12 - c.rho13 * c.rho13 -
                     c.rho23 * c.rho23;
  if (det < -kPsdTol)
    throw ValidationError(ErrorCode::CorrelationOutOfRange,
                          "correlation matrix not positive semi-definite");
}

void check_feller(double kappa, double theta, double sigma, double alpha,
                  double beta, double eta) {
  if (2.0 * kappa * theta < sigma * sigma) {
    std::ostringstream os;
    os << "Feller condition 2*kappa*theta >= sigma^2 violated: "
       << 2.0 * kappa * theta << " < " << sigma * sigma;
    throw ValidationError(ErrorCode::FellerViolation, os.str());
  }
  if (2.0 * alpha * beta < eta * eta) {
    std::ostringstream os;
    os << "Feller condition 2*alpha*beta >= eta^2 violated: "
       << 2.0 * alpha * beta << " < " << eta * eta;
    throw ValidationError(ErrorCode::FellerViolation, os.str());
  }
}

void check_initial_state(double s0, double v0, double r0) {
  if (!(s0 > 0.0) || !(v0 > 0.0) || !(r0 > 0.0))
    throw ValidationError(ErrorCode::NonPositiveInitialState,
                          "S0, V0 and r0 must all be positive");
}

void check_finite(std::initializer_list<double> vals, const char* what) {
  for (double v : vals)
    if (!std::isfinite(v))
      throw ValidationError(ErrorCode::ConfigError,
                            std::string("non-finite parameter in ") + what);
}

}  // namespace

PhysicalParams validate(const PhysicalParams& p, bool require_feller) {
  check_finite({p.mu, p.kappa, p.theta, p.sigma, p.alpha, p.beta, p.eta, p.s0,
                p.v0, p.r0},
               "PhysicalParams");
  if (require_feller) {
    check_feller(p.kappa, p.theta, p.sigma, p.alpha, p.beta, p.eta);
  } else {
    // the rate process still has to stay away from zero for the bond math
    check_feller(p.kappa, p.theta, 0.0, p.alpha, p.beta, p.eta);
  }
  check_correlations(p.corr);
  check_initial_state(p.s0, p.v0, p.r0);
  return p;
}

RiskNeutralParams validate(const RiskNeutralParams& q) {
  check_finite({q.kappa, q.theta, q.sigma, q.alpha, q.beta, q.eta, q.s0, q.v0,
                q.r0},
               "RiskNeutralParams");
  check_feller(q.kappa, q.theta, q.sigma, q.alpha, q.beta, q.eta);
  check_correlations(q.corr);
  check_initial_state(q.s0, q.v0, q.r0);
  return q;
}

ForwardParams validate(const ForwardParams& f) {
  check_finite({f.kappa, f.theta, f.sigma, f.alpha, f.beta, f.eta, f.s0, f.v0,
                f.r0, f.maturity},
               "ForwardParams");
  if (f.maturity < 0.0)
    throw ValidationError(ErrorCode::InvalidWindow, "maturity must be >= 0");
  check_feller(f.kappa, f.theta, f.sigma, f.alpha, f.beta, f.eta);
  check_correlations(f.corr);
  check_initial_state(f.s0, f.v0, f.r0);
  return f;
}

RiskNeutralParams to_risk_neutral(const PhysicalParams& p, const RiskPrices& rp,
                                  const VgParams& vg, CorrelationMode mode) {
  RiskNeutralParams q;
  double kappa_q;
  if (mode == CorrelationMode::Partial) {
    const double rho = p.corr.rho;
    kappa_q = p.kappa + rho * p.sigma * (rp.vartheta - p.sigma * rho * rp.hjb_i) +
              rp.lambda1 * std::sqrt(1.0 - rho * rho);
  } else {
    kappa_q = p.kappa + rp.lambda1;
  }
  const double alpha_q = p.alpha + rp.lambda2;
  if (kappa_q <= 0.0 || alpha_q <= 0.0)
    throw ValidationError(ErrorCode::DegenerateParameter,
                          "risk-neutral mean-reversion speed must stay positive");
  q.kappa = kappa_q;
  q.theta = p.kappa * p.theta / kappa_q;
  q.sigma = p.sigma;
  q.alpha = alpha_q;
  q.beta = p.alpha * p.beta / alpha_q;
  q.eta = p.eta;
  q.corr = p.corr;
  q.corr.mode = mode;
  q.s0 = p.s0;
  q.v0 = p.v0;
  q.r0 = p.r0;
  q.vg = vg;
  return q;
}

ForwardParams to_forward(const RiskNeutralParams& q, double maturity) {
  ForwardParams f;
  f.kappa = q.kappa;
  f.theta = q.theta;
  f.sigma = q.sigma;
  f.alpha = q.alpha;
  f.beta = q.beta;
  f.eta = q.eta;
  f.corr = q.corr;
  f.s0 = q.s0;
  f.v0 = q.v0;
  f.r0 = q.r0;
  f.maturity = maturity;
  f.vg = q.vg;
  return f;
}

}  // namespace vswap
