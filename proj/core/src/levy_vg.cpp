#include "vswap/levy_vg.hpp"

#include <cmath>
#include <sstream>

namespace vswap {

namespace {

void check_kernel(const VgParams& p) {
  if (!(p.bm_vol > 0.0) || !(p.clock_var > 0.0))
    throw ValidationError(ErrorCode::DegenerateParameter,
                          "VG kernel needs bm_vol > 0 and clock_var > 0");
}

// the moment discriminant minus one, kept separate so log1p can digest it
// without losing precision when the jumps are tiny
double discriminant_shift(double u, const VgParams& p) {
  return -u * p.bm_drift * p.clock_var -
         0.5 * u * u * p.bm_vol * p.bm_vol * p.clock_var;
}

}  // namespace

bool exponent_defined(double u, const VgParams& p) {
  return discriminant_shift(u, p) > -1.0;
}

VgTails vg_tails(const VgParams& p) {
  check_kernel(p);
  const double k = p.clock_var;
  const double root =
      std::sqrt(0.25 * p.bm_drift * p.bm_drift * k * k +
                0.5 * p.bm_vol * p.bm_vol * k);
  const double half_drift = 0.5 * p.bm_drift * k;
  return {1.0 / (root + half_drift), 1.0 / (root - half_drift)};
}

double kernel_density(double x, const VgParams& p) {
  check_kernel(p);
  if (x == 0.0)
    throw NumericalError(ErrorCode::DomainError,
                         "VG kernel density undefined at x = 0");
  const VgTails g = vg_tails(p);
  const double ax = std::abs(x);
  const double decay = x > 0.0 ? g.g_plus : g.g_minus;
  return std::exp(-decay * ax) / (p.clock_var * ax);
}

double char_exponent(double u, const VgParams& p) {
  check_kernel(p);
  const double shift = discriminant_shift(u, p);
  if (!(shift > -1.0)) {
    std::ostringstream os;
    os << "exponent undefined at u = " << u;
    throw NumericalError(ErrorCode::OutsideMomentDomain, os.str());
  }
  return -std::log1p(shift) / p.clock_var;
}

double jump_term(double omega, const VgParams& p) {
  return char_exponent(omega, p) - omega * char_exponent(1.0, p);
}

double premium_jump_integral(double vartheta, const VgParams& p,
                             double kernel_scale) {
  const double value = char_exponent(1.0, p) -
                       char_exponent(1.0 - vartheta, p) +
                       char_exponent(-vartheta, p);
  return kernel_scale * value;
}

double hjb_gamma(double vartheta, double delta, const VgParams& p,
                 GammaConvention conv, double kernel_scale) {
  const double psi_one_minus = char_exponent(1.0 - vartheta, p);
  const double psi_mid = conv == GammaConvention::Printed
                             ? char_exponent(vartheta, p)
                             : char_exponent(-vartheta, p);
  const double jump_part =
      -(1.0 - vartheta) * (psi_one_minus - psi_mid) + psi_one_minus;
  return -delta + kernel_scale * jump_part;
}

}  // namespace vswap
