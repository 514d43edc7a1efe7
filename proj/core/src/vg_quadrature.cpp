#include "vswap/vg_quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace vswap {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants)
constexpr double kx[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
constexpr double kw[8] = {
    0.022935322010529224963732008059, 0.063092092629978553290700663189,
    0.104790010322250183839876322542, 0.140653259715525918745189590510,
    0.169004726639267902826583426599, 0.190350578064785409913256402421,
    0.204432940075298892414161999234, 0.209482141084727828012999174892};
constexpr double gw[4] = {
    0.129484966168869693270611432679, 0.279705391489276667901467771424,
    0.381830050505118944950369775489, 0.417959183673469387755102040816};

struct GkResult {
  double integral = 0.0;
  double error = 0.0;
  double max_abs = 0.0;  // largest |integrand| sampled
};

template <typename F>
GkResult gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double ik = 0.0, ig = 0.0, peak = 0.0;
  for (int j = 0; j < 8; ++j) {
    const double dx = half * kx[j];
    const double f1 = f(mid - dx);
    const double f2 = (j == 7) ? f1 : f(mid + dx);
    const double sum = (j == 7) ? f1 : f1 + f2;
    ik += kw[j] * sum;
    if (j % 2 == 1) ig += gw[j / 2] * sum;
    peak = std::max({peak, std::abs(f1), std::abs(f2)});
  }
  GkResult r;
  r.integral = ik * half;
  r.error = std::abs((ik - ig) * half);
  r.max_abs = peak;
  return r;
}

// Refines while the split budget lasts; a budget- or depth-capped panel is
// accepted with its error estimate intact, and the caller decides from the
// accumulated total whether the tolerance was actually met.
template <typename F>
GkResult adaptive(const F& f, double a, double b, double tol, int& budget,
                  int depth = 0) {
  GkResult whole = gk15(f, a, b);
  if (!std::isfinite(whole.integral))
    throw NumericalError(ErrorCode::QuadratureNonConvergent,
                         "levy_integral: non-finite integrand");
  if (whole.error <= tol || depth > 16 || budget <= 0 ||
      b - a < 1e-15 * std::max(1.0, std::abs(b)))
    return whole;
  --budget;
  const double mid = 0.5 * (a + b);
  GkResult left = adaptive(f, a, mid, 0.5 * tol, budget, depth + 1);
  GkResult right = adaptive(f, mid, b, 0.5 * tol, budget, depth + 1);
  GkResult r;
  r.integral = left.integral + right.integral;
  r.error = left.error + right.error;
  r.max_abs = std::max({whole.max_abs, left.max_abs, right.max_abs});
  return r;
}

}  // namespace

double levy_integral(const std::function<double(double)>& f, const VgParams& p,
                     const QuadratureOptions& opts) {
  const VgTails tails = vg_tails(p);
  int budget = opts.max_panels;
  double total = 0.0;
  double total_error = 0.0;

  for (int sign : {1, -1}) {
    const double decay = sign > 0 ? tails.g_plus : tails.g_minus;
    auto integrand = [&](double y) {
      return f(sign * y) * std::exp(-decay * y) / (p.clock_var * y);
    };

    double peak = 0.0;
    double lo = 0.0;
    double hi = opts.first_panel_width;
    // march geometrically away from the singularity until the tail dies;
    // never stop before a few e-folds of the kernel decay have been covered
    const double min_reach = 30.0 / decay;
    for (int panel = 0; panel < opts.max_panels; ++panel) {
      GkResult r = adaptive(integrand, lo, hi, 0.25 * opts.abs_tol / 64.0,
                            budget);
      total += r.integral;
      total_error += r.error;
      peak = std::max(peak, r.max_abs);
      const bool tail_dead = hi >= min_reach &&
                             r.max_abs <= opts.tail_cutoff * peak &&
                             std::abs(r.integral) < 0.01 * opts.abs_tol;
      if (tail_dead) break;
      lo = hi;
      hi *= 2.0;
      if (panel + 1 == opts.max_panels || hi > 1e12)
        throw NumericalError(ErrorCode::QuadratureNonConvergent,
                             "levy_integral: tail did not decay");
    }
  }
  if (total_error > opts.abs_tol + 1e-11 * std::abs(total))
    throw NumericalError(ErrorCode::QuadratureNonConvergent,
                         "levy_integral: error estimate above tolerance");
  return total;
}

}  // namespace vswap
