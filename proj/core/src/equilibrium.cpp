#include "vswap/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace vswap {

namespace {

struct HjbSystem {
  double gamma;  // jump constant of the first equation
  double kappa, theta, sigma, alpha, beta, eta, vartheta;

  // unknowns u = (I, K, y) with y = e^{-(M + I theta + K beta)/vartheta}
  std::array<double, 3> residual(const std::array<double, 3>& u) const {
    const double i = u[0], k = u[1], y = u[2];
    return {
        gamma + kappa * theta * i + alpha * beta * k +
            y * (vartheta + theta * i + beta * k),
        0.5 * vartheta * (1.0 - vartheta) - kappa * i +
            0.5 * sigma * sigma * i * i - i * y,
        (1.0 - vartheta) - alpha * k + 0.5 * eta * eta * k * k - k * y,
    };
  }

  std::array<std::array<double, 3>, 3> jacobian(
      const std::array<double, 3>& u) const {
    const double i = u[0], k = u[1], y = u[2];
    return {{
        {kappa * theta + y * theta, alpha * beta + y * beta,
         vartheta + theta * i + beta * k},
        {-kappa + sigma * sigma * i - y, 0.0, -i},
        {0.0, -alpha + eta * eta * k - y, -k},
    }};
  }
};

double max_abs(const std::array<double, 3>& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

bool solve3(const std::array<std::array<double, 3>, 3>& a,
            const std::array<double, 3>& b, std::array<double, 3>& x) {
  std::array<std::array<double, 4>, 3> m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = a[r][c];
    m[r][3] = b[r];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-300) return false;
    std::swap(m[col], m[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int r = 0; r < 3; ++r) x[r] = m[r][3] / m[r][r];
  return true;
}

std::optional<std::array<double, 3>> newton(const HjbSystem& sys,
                                            std::array<double, 3> u,
                                            double tol, int max_iter,
                                            int* iters_out = nullptr) {
  std::array<double, 3> f = sys.residual(u);
  double fnorm = max_abs(f);
  for (int it = 0; it < max_iter; ++it) {
    if (fnorm <= tol) {
      if (iters_out) *iters_out = it;
      return u;
    }
    std::array<double, 3> neg_f{-f[0], -f[1], -f[2]};
    std::array<double, 3> step;
    if (!solve3(sys.jacobian(u), neg_f, step)) return std::nullopt;
    double lam = 1.0;
    for (int half = 0; half < 40; ++half) {
      std::array<double, 3> trial{u[0] + lam * step[0], u[1] + lam * step[1],
                                  u[2] + lam * step[2]};
      if (trial[2] > 0.0) {  // the auxiliary exponential stays positive
        const std::array<double, 3> ft = sys.residual(trial);
        const double fn = max_abs(ft);
        if (fn < fnorm || fn <= tol) {
          u = trial;
          f = ft;
          fnorm = fn;
          break;
        }
      }
      lam *= 0.5;
      if (half == 39) return std::nullopt;
    }
  }
  return fnorm <= tol ? std::optional(u) : std::nullopt;
}

std::array<double, 3> to_ikm(const std::array<double, 3>& u, double vartheta,
                             double theta, double beta) {
  const double m = -vartheta * std::log(u[2]) - u[0] * theta - u[1] * beta;
  return {u[0], u[1], m};
}

}  // namespace

HjbSolution solve_hjb(const PhysicalParams& p, const RiskPrices& rp,
                      const VgParams& vg, const HjbOptions& opts) {
  if (!(rp.vartheta > 0.0) || rp.vartheta == 1.0)
    throw ValidationError(ErrorCode::PreconditionError,
                          "solve_hjb: vartheta > 0 and vartheta != 1 required");
  if (!(rp.delta > 0.0))
    throw ValidationError(ErrorCode::PreconditionError,
                          "solve_hjb: delta > 0 required");

  auto make_system = [&](double scale) {
    HjbSystem sys;
    sys.gamma = hjb_gamma(rp.vartheta, rp.delta, vg, opts.gamma_convention,
                          scale);
    sys.kappa = p.kappa;
    sys.theta = p.theta;
    sys.sigma = p.sigma;
    sys.alpha = p.alpha;
    sys.beta = p.beta;
    sys.eta = p.eta;
    sys.vartheta = rp.vartheta;
    return sys;
  };

  // multistart grid around the origin (y = e^0 = 1 at the center)
  const double offsets[3] = {-2.0, 0.0, 2.0};
  const double y_starts[3] = {0.5, 1.0, 2.0};

  auto multistart = [&](const HjbSystem& sys) {
    std::vector<std::array<double, 3>> roots;
    for (double i0 : offsets)
      for (double k0 : offsets)
        for (double y0 : y_starts) {
          int it = 0;
          auto r = newton(sys, {i0, k0, y0}, opts.tol, opts.max_iterations, &it);
          if (!r) continue;
          bool fresh = true;
          for (const auto& known : roots)
            if (std::abs(known[0] - (*r)[0]) + std::abs(known[1] - (*r)[1]) +
                    std::abs(known[2] - (*r)[2]) <
                1e-6)
              fresh = false;
          if (fresh) roots.push_back(*r);
        }
    return roots;
  };

  // continuation in jump intensity from the jump-free system
  const HjbSystem base = make_system(0.0);
  auto tracked_roots = multistart(base);
  if (tracked_roots.empty())
    throw NumericalError(ErrorCode::NoRootFound,
                         "solve_hjb: no root of the jump-free system");
  // root of the jump-free system closest to the origin seeds the homotopy
  std::array<double, 3> track = *std::min_element(
      tracked_roots.begin(), tracked_roots.end(),
      [](const auto& a, const auto& b) {
        return std::abs(a[0]) + std::abs(a[1]) < std::abs(b[0]) + std::abs(b[1]);
      });
  for (double scale : {0.25, 0.5, 0.75, 1.0}) {
    auto r = newton(make_system(scale), track, opts.tol, opts.max_iterations);
    if (!r)
      throw NumericalError(ErrorCode::NoRootFound,
                           "solve_hjb: continuation step lost the root");
    track = *r;
  }

  const HjbSystem full = make_system(1.0);
  auto roots = multistart(full);
  if (roots.empty()) roots.push_back(track);

  // select the multistart root the continuation landed on
  std::array<double, 3> best = roots.front();
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& r : roots) {
    const double dist = std::abs(r[0] - track[0]) + std::abs(r[1] - track[1]) +
                        std::abs(r[2] - track[2]);
    if (dist < best_dist) {
      best_dist = dist;
      best = r;
    }
  }

  int final_iters = 0;
  auto polished = newton(full, best, opts.tol, opts.max_iterations, &final_iters);
  if (polished) best = *polished;

  HjbSolution sol;
  const auto ikm = to_ikm(best, rp.vartheta, p.theta, p.beta);
  sol.i = ikm[0];
  sol.k = ikm[1];
  sol.m = ikm[2];
  sol.residual = max_abs(full.residual(best));
  sol.iterations = final_iters;
  for (const auto& r : roots)
    sol.all_roots.push_back(to_ikm(r, rp.vartheta, p.theta, p.beta));
  return sol;
}

double equity_premium(double v, const RiskPrices& rp, const VgParams& vg,
                      double hjb_i, double rho, double sigma) {
  return (rp.vartheta - sigma * rho * hjb_i) * v +
         premium_jump_integral(rp.vartheta, vg);
}

double expected_premium(double t, const PhysicalParams& p, const RiskPrices& rp,
                        const VgParams& vg) {
  if (p.corr.stock_variance() != 0.0)
    throw ValidationError(ErrorCode::PreconditionError,
                          "expected_premium is derived under rho = 0");
  const double decay = std::exp(-p.kappa * t);
  return rp.vartheta * (decay * p.v0 + p.theta * (1.0 - decay)) +
         premium_jump_integral(rp.vartheta, vg);
}

}  // namespace vswap
