#include "vswap/cir_sqrt_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vswap {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kTermCutoff = 1e-14;
// noncentrality above which the Poisson mixture is evaluated by its
// asymptotic expansion instead of term summation
constexpr double kSeriesLimit = 2e6;
constexpr double kLgammaLimit = 1e8;

void check_time(double t) {
  if (!(t > 0.0))
    throw ValidationError(ErrorCode::PreconditionError,
                          "sqrt moments need t > 0");
}

// Gamma(z + 1/2) / Gamma(z)
double half_shift_gamma_ratio(double z) {
  if (z < kLgammaLimit) return std::exp(std::lgamma(z + 0.5) - std::lgamma(z));
  const double iz = 1.0 / z;
  const double s =
      1.0 + iz * (-1.0 / 8.0 + iz * (1.0 / 128.0 + iz * (5.0 / 1024.0)));
  return std::sqrt(z) * s;
}

}  // namespace

double CirMomentSpec::c(double t) const {
  if (std::abs(kappa) < 1e-14) return 0.25 * sigma * sigma * t;
  return 0.25 * sigma * sigma * (-std::expm1(-kappa * t)) / kappa;
}

double CirMomentSpec::d() const { return 4.0 * kappa * theta / (sigma * sigma); }

double CirMomentSpec::lambda(double t) const {
  return y0 * std::exp(-kappa * t) / c(t);
}

double sqrt_mean_series(double t, const CirMomentSpec& s) {
  check_time(t);
  const double c = s.c(t);
  const double d = s.d();
  const double m = 0.5 * s.lambda(t);  // Poisson intensity of the mixture
  const double scale = std::sqrt(2.0 * c);

  if (m > kSeriesLimit) {
    // N ~ Poisson(m) concentrated: expand E[sqrt(N + d/2)] about the mean
    // through the fourth central moment, with the Gamma-ratio correction
    // factor frozen at the mean
    const double z = m + 0.5 * d;
    const double corr = half_shift_gamma_ratio(z) / std::sqrt(z);
    const double ez = std::sqrt(z) - (m / 8.0) * std::pow(z, -1.5) +
                      (m / 16.0) * std::pow(z, -2.5) -
                      (5.0 * (3.0 * m * m + m) / 128.0) * std::pow(z, -3.5);
    return scale * corr * ez;
  }

  auto log_pois = [&](long k) {
    if (m == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return static_cast<double>(k) * std::log(m) - m -
           std::lgamma(static_cast<double>(k) + 1.0);
  };
  auto term = [&](long k) {
    return std::exp(log_pois(k)) *
           half_shift_gamma_ratio(0.5 * d + static_cast<double>(k));
  };

  const long k0 = std::max<long>(0, static_cast<long>(std::floor(m)));
  double sum = term(k0);
  int used = 1;
  for (long k = k0 + 1;; ++k) {  // upward from the mode
    const double tk = term(k);
    sum += tk;
    if (++used > kMaxTerms)
      throw NumericalError(ErrorCode::SeriesNonConvergent,
                           "sqrt_mean_series: term budget exhausted");
    if (tk < kTermCutoff * sum) break;
  }
  for (long k = k0 - 1; k >= 0; --k) {  // downward from the mode
    const double tk = term(k);
    sum += tk;
    if (++used > kMaxTerms)
      throw NumericalError(ErrorCode::SeriesNonConvergent,
                           "sqrt_mean_series: term budget exhausted");
    if (tk < kTermCutoff * sum) break;
  }
  return scale * sum;
}

double sqrt_mean_approx(double t, const CirMomentSpec& s) {
  check_time(t);
  const double c = s.c(t);
  const double d = s.d();
  const double l = s.lambda(t);
  const double radicand = c * (l - 1.0) + c * d + c * d / (2.0 * (d + l));
  if (radicand < 0.0)
    throw NumericalError(ErrorCode::NegativeRadicand,
                         "sqrt_mean_approx: negative radicand");
  return std::sqrt(radicand);
}

double sqrt_variance_approx(double t, const CirMomentSpec& s) {
  check_time(t);
  const double c = s.c(t);
  const double d = s.d();
  const double l = s.lambda(t);
  return c - c * d / (2.0 * (d + l));
}

double ExpFit::value(double t) const { return a + b * std::exp(-c * t); }

ExpFit fit_exp_decay(const CirMomentSpec& s, BConvention conv) {
  const double a2 = s.theta - s.sigma * s.sigma / (8.0 * s.kappa);
  if (!(a2 > 0.0))
    throw NumericalError(ErrorCode::FitDomainError,
                         "fit_exp_decay: theta <= sigma^2 / (8 kappa)");
  ExpFit fit;
  fit.a = std::sqrt(a2);
  if (conv == BConvention::Difference) {
    fit.b = std::sqrt(s.y0) - fit.a;
  } else {
    const double rad = s.y0 - fit.a;
    if (rad < 0.0)
      throw NumericalError(ErrorCode::FitDomainError,
                           "fit_exp_decay: printed b radicand negative");
    fit.b = std::sqrt(rad);
  }
  if (std::abs(fit.b) < 1e-12)
    throw NumericalError(ErrorCode::FitDomainError,
                         "fit_exp_decay: degenerate b");
  const double arg = (sqrt_mean_approx(1.0, s) - fit.a) / fit.b;
  if (!(arg > 0.0))
    throw NumericalError(ErrorCode::FitDomainError,
                         "fit_exp_decay: non-positive log argument");
  fit.c = -std::log(arg);
  return fit;
}

double cross_moment(double t, const CirMomentSpec& spec_v,
                    const CirMomentSpec& spec_r, double rho23,
                    BConvention conv) {
  const ExpFit fit_v = fit_exp_decay(spec_v, conv);
  const ExpFit fit_r = fit_exp_decay(spec_r, conv);
  const double psi_v = sqrt_variance_approx(t, spec_v);
  const double psi_r = sqrt_variance_approx(t, spec_r);
  return 0.25 * spec_v.sigma * spec_r.sigma * rho23 *
             std::sqrt(psi_v * psi_r) +
         fit_v.value(t) * fit_r.value(t);
}

}  // namespace vswap
