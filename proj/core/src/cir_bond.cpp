#include "vswap/cir_bond.hpp"

#include <cmath>

namespace vswap {

namespace {

constexpr double kDeterministicEta = 1e-8;

void check_window(double t, double maturity) {
  if (t > maturity || t < 0.0)
    throw ValidationError(ErrorCode::InvalidWindow,
                          "bond window requires 0 <= t <= T");
}

// (1 - e^{-a tau}) / a, continuous at a = 0
double decay_ratio(double a, double tau) {
  if (std::abs(a) < 1e-14) return tau;
  return -std::expm1(-a * tau) / a;
}

}  // namespace

double cir_gamma(double alpha, double eta) {
  return std::sqrt(alpha * alpha + 2.0 * eta * eta);
}

double bond_b(double t, double maturity, const ForwardParams& p) {
  check_window(t, maturity);
  const double tau = maturity - t;
  if (tau == 0.0) return 0.0;
  if (p.eta < kDeterministicEta) return decay_ratio(p.alpha, tau);
  const double g = cir_gamma(p.alpha, p.eta);
  // 2 (e^{g tau} - 1) / (2g + (alpha+g)(e^{g tau} - 1)) rescaled by e^{-g tau}
  // so nothing overflows for long windows
  const double q = std::exp(-g * tau);
  const double one_minus_q = -std::expm1(-g * tau);
  return 2.0 * one_minus_q / (2.0 * g * q + (p.alpha + g) * one_minus_q);
}

double bond_a(double t, double maturity, const ForwardParams& p) {
  check_window(t, maturity);
  const double tau = maturity - t;
  if (tau == 0.0) return 1.0;
  if (p.eta < kDeterministicEta) {
    const double b = decay_ratio(p.alpha, tau);
    return std::exp(-p.beta * (tau - b));
  }
  const double g = cir_gamma(p.alpha, p.eta);
  const double q = std::exp(-g * tau);
  const double one_minus_q = -std::expm1(-g * tau);
  // ln of 2g e^{(alpha+g) tau/2} / (2g + (alpha+g)(e^{g tau}-1)), with the
  // denominator log taken as g tau + ln(2g q + (alpha+g)(1-q))
  const double log_core = std::log(2.0 * g) + 0.5 * (p.alpha + g) * tau -
                          g * tau -
                          std::log(2.0 * g * q + (p.alpha + g) * one_minus_q);
  const double exponent = 2.0 * p.alpha * p.beta / (p.eta * p.eta);
  return std::exp(exponent * log_core);
}

BondCoefficients bond_coefficients(double t, double maturity,
                                   const ForwardParams& p) {
  return {bond_a(t, maturity, p), bond_b(t, maturity, p)};
}

double bond_price(double t, double maturity, double r, const ForwardParams& p) {
  if (r < 0.0)
    throw ValidationError(ErrorCode::PreconditionError,
                          "bond_price: r must be >= 0");
  const BondCoefficients c = bond_coefficients(t, maturity, p);
  return c.a * std::exp(-c.b * r);
}

}  // namespace vswap
