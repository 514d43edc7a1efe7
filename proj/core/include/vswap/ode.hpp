#ifndef VSWAP_ODE_HPP
#define VSWAP_ODE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "vswap/errors.hpp"

namespace vswap::ode {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 2000000;
  bool store_dense = false;  // keep per-step interpolation data
};

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using Rhs = std::function<void(double, const State<N>&, State<N>&)>;

// One accepted Dormand-Prince step with the contd5 interpolation
// coefficients; eval / eval_derivative reconstruct the solution and its
// time derivative anywhere inside [t, t + h].
template <std::size_t N>
struct DenseSegment {
  double t = 0.0;
  double h = 0.0;
  State<N> r1{}, r2{}, r3{}, r4{}, r5{};

  State<N> eval(double s) const {
    const double th = (s - t) / h;
    const double th1 = 1.0 - th;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    return y;
  }

  State<N> eval_derivative(double s) const {
    const double th = (s - t) / h;
    const double om = 1.0 - 2.0 * th;
    const double tt = th * (1.0 - th);
    State<N> d;
    for (std::size_t i = 0; i < N; ++i) {
      // with Q(th) = r3 + th r4 + th(1-th) r5,
      // P(th) = r1 + th r2 + th(1-th) Q  and
      // P'(th) = r2 + (1-2th) Q + th(1-th) (r4 + (1-2th) r5)
      const double q = r3[i] + th * r4[i] + tt * r5[i];
      d[i] = (r2[i] + om * q + tt * (r4[i] + om * r5[i])) / h;
    }
    return d;
  }
};

template <std::size_t N>
struct Solution {
  State<N> y{};
  long steps = 0;
  long rejected = 0;
  std::vector<DenseSegment<N>> dense;

  State<N> at(double s) const {
    for (const auto& seg : dense)
      if (s <= seg.t + seg.h * (1.0 + 1e-12)) return seg.eval(s);
    return dense.empty() ? y : dense.back().eval(s);
  }

  State<N> derivative_at(double s) const {
    for (const auto& seg : dense)
      if (s <= seg.t + seg.h * (1.0 + 1e-12)) return seg.eval_derivative(s);
    return dense.back().eval_derivative(s);
  }
};

namespace detail {
// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// contd5 dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;
}  // namespace detail

// Adaptive DOPRI5 from t0 to t1 (t1 >= t0).
template <std::size_t N>
Solution<N> integrate(const Rhs<N>& f, double t0, double t1, State<N> y0,
                      const Options& opts = {}) {
  using namespace detail;
  Solution<N> sol;
  sol.y = y0;
  const double span = t1 - t0;
  if (span < 0.0)
    throw ValidationError(ErrorCode::InvalidWindow, "ode: t1 < t0");
  if (span == 0.0) return sol;

  State<N> y = y0, k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  double t = t0;
  f(t, y, k1);
  double h = std::min({span, opts.max_step, 0.01 * span + 1e-4});

  auto stage = [&](const State<N>& base, double hh, State<N>& out,
                   std::initializer_list<std::pair<const State<N>*, double>> terms) {
    for (std::size_t i = 0; i < N; ++i) {
      double acc = base[i];
      for (const auto& [k, w] : terms) acc += hh * w * (*k)[i];
      out[i] = acc;
    }
  };

  for (long it = 0; it < opts.max_steps; ++it) {
    if (t + h > t1) h = t1 - t;

    stage(y, h, ytmp, {{&k1, a21}});
    f(t + c2 * h, ytmp, k2);
    stage(y, h, ytmp, {{&k1, a31}, {&k2, a32}});
    f(t + c3 * h, ytmp, k3);
    stage(y, h, ytmp, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
    f(t + c4 * h, ytmp, k4);
    stage(y, h, ytmp, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
    f(t + c5 * h, ytmp, k5);
    stage(y, h, ytmp, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
    f(t + h, ytmp, k6);
    stage(y, h, ynew, {{&k1, b1}, {&k3, b3}, {&k4, b4}, {&k5, b5}, {&k6, b6}});
    f(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale =
          opts.abs_tol +
          opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = ei / scale;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(N));

    if (err <= 1.0 || h <= 16.0 * std::numeric_limits<double>::epsilon() *
                               std::max(std::abs(t), 1.0)) {
      if (opts.store_dense) {
        DenseSegment<N> seg;
        seg.t = t;
        seg.h = h;
        for (std::size_t i = 0; i < N; ++i) {
          const double dy = ynew[i] - y[i];
          seg.r1[i] = y[i];
          seg.r2[i] = dy;
          seg.r3[i] = h * k1[i] - dy;
          seg.r4[i] = dy - h * k7[i] - seg.r3[i];
          seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                           d6 * k6[i] + d7 * k7[i]);
        }
        sol.dense.push_back(seg);
      }
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      ++sol.steps;
      if (t >= t1 - 1e-14 * std::max(std::abs(t1), 1.0)) {
        sol.y = y;
        return sol;
      }
      const double grow =
          (err == 0.0) ? 5.0
                       : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
      h = std::min(h * grow, opts.max_step);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      ++sol.rejected;
    }
  }
  throw NumericalError(ErrorCode::OdeNonConvergence,
                       "ode: step budget exhausted before reaching t1");
}

// Fixed-grid DOPRI5 over `steps` equal steps.  The resulting map
// y0 -> y(t1) is a fixed composition of smooth stage maps, so it is itself
// a smooth function of any parameter of f; the swap pricer relies on that
// when differentiating through the solver.
template <std::size_t N>
State<N> integrate_fixed(const Rhs<N>& f, double t0, double t1, State<N> y0,
                         long steps) {
  using namespace detail;
  if (t1 < t0)
    throw ValidationError(ErrorCode::InvalidWindow, "ode: t1 < t0");
  if (steps <= 0 || t1 == t0) return y0;
  const double h = (t1 - t0) / static_cast<double>(steps);
  State<N> y = y0, k1, k2, k3, k4, k5, k6, ytmp;
  for (long n = 0; n < steps; ++n) {
    const double t = t0 + h * static_cast<double>(n);
    f(t, y, k1);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      y[i] += h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  }
  return y;
}

}  // namespace vswap::ode

#endif
