#include "vswap/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <thread>

#include "vswap/cir_bond.hpp"
#include "vswap/rng.hpp"

namespace vswap {

namespace {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 128) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

McEstimate summarize(const std::vector<double>& per_path,
                     std::int64_t reported_paths) {
  const auto n = static_cast<double>(per_path.size());
  McEstimate e;
  e.paths = reported_paths;
  const auto [lo, hi] = std::minmax_element(per_path.begin(), per_path.end());
  if (*lo == *hi) {  // degenerate sample: exact mean, no spread
    e.mean = *lo;
    return e;
  }
  e.mean = pairwise_sum(per_path) / n;
  if (per_path.size() > 1) {
    std::vector<double> sq(per_path.size());
    for (std::size_t i = 0; i < per_path.size(); ++i) {
      const double d = per_path[i] - e.mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    e.stderr_ = std::sqrt(var / n);
  }
  return e;
}

struct Cholesky3 {
  double l21 = 0.0, l22 = 1.0, l31 = 0.0, l32 = 0.0, l33 = 1.0;
};

Cholesky3 correlate(const Correlations& c) {
  Cholesky3 ch;
  if (c.mode == CorrelationMode::Partial) {
    ch.l21 = c.rho;
    ch.l22 = std::sqrt(std::max(0.0, 1.0 - c.rho * c.rho));
    return ch;
  }
  ch.l21 = c.rho12;
  ch.l22 = std::sqrt(std::max(0.0, 1.0 - c.rho12 * c.rho12));
  if (ch.l22 < 1e-12)
    throw ValidationError(ErrorCode::CorrelationOutOfRange,
                          "mc: |rho12| = 1 leaves the rate driver undefined");
  ch.l31 = c.rho13;
  ch.l32 = (c.rho23 - c.rho12 * c.rho13) / ch.l22;
  const double rest = 1.0 - c.rho13 * c.rho13 - ch.l32 * ch.l32;
  ch.l33 = std::sqrt(std::max(0.0, rest));
  return ch;
}

// everything the step kernel needs, measure differences folded in
struct Engine {
  double x_drift_const = 0.0;  // mu under P, 0 otherwise (rate added per step)
  bool x_drift_is_rate = true;
  double kappa = 0.0, theta = 0.0, sigma = 0.0;
  double alpha = 0.0, beta = 0.0, eta = 0.0;
  Cholesky3 chol;
  bool full_mode = false;
  double rho13 = 0.0, rho23 = 0.0;
  VgParams vg;
  double psi1 = 0.0;
  bool jumps = false;
  bool randomness_off = false;
  bool milstein = false;
  std::vector<double> b_by_step;  // B(t_k, T), empty unless forward measure
};

struct PathState {
  double x, v, r;
};

// one Euler (full truncation) step; z* are the correlated standard normals
// and (g, zj) the gamma subordinator increment with its Gaussian
inline void advance(const Engine& e, PathState& s, double dt, double sqdt,
                    double b_t, double z1, double z2, double z3, double g,
                    double zj) {
  const double vp = std::max(s.v, 0.0);
  const double rp = std::max(s.r, 0.0);
  const double sqv = std::sqrt(vp);
  const double sqr = std::sqrt(rp);

  const double zx = z1;
  const double zv = e.chol.l21 * z1 + e.chol.l22 * z2;
  const double zr = e.full_mode
                        ? e.chol.l31 * z1 + e.chol.l32 * z2 + e.chol.l33 * z3
                        : z3;

  double x_drift = (e.x_drift_is_rate ? rp : e.x_drift_const) - 0.5 * vp;
  double v_drift = e.kappa * (e.theta - vp);
  if (e.full_mode && b_t != 0.0) {
    const double cross = b_t * e.eta * sqv * sqr;
    x_drift -= e.rho13 * cross;
    v_drift -= e.rho23 * e.sigma * cross;
  }
  double jump = 0.0;
  if (e.jumps) {
    jump = e.vg.bm_drift * g + e.vg.bm_vol * std::sqrt(g) * zj - e.psi1 * dt;
  }
  s.x += x_drift * dt + sqv * sqdt * zx + jump;

  double dv = v_drift * dt + e.sigma * sqv * sqdt * zv;
  double dr = (e.alpha * e.beta - (e.alpha + b_t * e.eta * e.eta) * rp) * dt +
              e.eta * sqr * sqdt * zr;
  if (e.milstein) {
    dv += 0.25 * e.sigma * e.sigma * dt * (zv * zv - 1.0);
    dr += 0.25 * e.eta * e.eta * dt * (zr * zr - 1.0);
  }
  s.v += dv;
  s.r += dr;
}

std::vector<long> step_indices(const std::vector<double>& obs_times,
                               int steps_per_year, long min_per_interval) {
  if (obs_times.empty() || obs_times.front() != 0.0)
    throw ValidationError(ErrorCode::GridMismatch,
                          "observation grid must start at 0");
  std::vector<long> idx(obs_times.size());
  const double spy = static_cast<double>(steps_per_year);
  for (std::size_t i = 0; i < obs_times.size(); ++i) {
    const double k = obs_times[i] * spy;
    const long rounded = std::lround(k);
    if (std::abs(k - static_cast<double>(rounded)) > 1e-9)
      throw ValidationError(ErrorCode::GridMismatch,
                            "observation time not on the step grid");
    idx[i] = rounded;
    if (i > 0 && idx[i] - idx[i - 1] < min_per_interval)
      throw ValidationError(ErrorCode::GridMismatch,
                            "too few steps per observation interval");
  }
  return idx;
}

std::vector<McEstimate> run_engine(const Engine& engine, const SimConfig& cfg,
                                   const std::vector<double>& obs_times,
                                   const std::vector<PathFunctional>& fns,
                                   double x0, double v0, double r0,
                                   long min_steps_per_interval) {
  const SimConfig vc = validate(cfg);
  const std::vector<long> obs_idx =
      step_indices(obs_times, vc.steps_per_year, min_steps_per_interval);
  const long total_steps = obs_idx.back();
  const double dt = 1.0 / static_cast<double>(vc.steps_per_year);
  const double sqdt = std::sqrt(dt);
  const bool anti = vc.antithetic;
  if (anti && vc.paths % 2 != 0)
    throw ValidationError(ErrorCode::ConfigError,
                          "antithetic sampling needs an even path count");
  const std::int64_t units = anti ? vc.paths / 2 : vc.paths;

  const double gamma_shape = engine.jumps ? dt / engine.vg.clock_var : 0.0;

  std::vector<std::vector<double>> results(
      fns.size(), std::vector<double>(static_cast<std::size_t>(units)));
  const std::size_t n_obs = obs_times.size();

  // each unit owns its stream and its results slot, so any partition of the
  // unit range across workers produces identical output
  auto run_units = [&](std::int64_t lo, std::int64_t hi) {
    PathObservation obs_a, obs_b;
    obs_a.times = &obs_times;
    obs_b.times = &obs_times;
    for (std::int64_t unit = lo; unit < hi; ++unit) {
      Rng rng(vc.seed, static_cast<std::uint64_t>(unit));
      PathState a{x0, v0, r0};
      PathState b = a;

      obs_a.x.assign(n_obs, 0.0);
      obs_a.v.assign(n_obs, 0.0);
      obs_a.r.assign(n_obs, 0.0);
      obs_a.integral_r_at.assign(n_obs, 0.0);
      obs_a.integral_r = 0.0;
      if (anti) {
        obs_b.x.assign(n_obs, 0.0);
        obs_b.v.assign(n_obs, 0.0);
        obs_b.r.assign(n_obs, 0.0);
        obs_b.integral_r_at.assign(n_obs, 0.0);
        obs_b.integral_r = 0.0;
      }

      std::size_t next_obs = 0;
      auto record = [&](long step) {
        while (next_obs < n_obs && obs_idx[next_obs] == step) {
          obs_a.x[next_obs] = a.x;
          obs_a.v[next_obs] = std::max(a.v, 0.0);
          obs_a.r[next_obs] = std::max(a.r, 0.0);
          obs_a.integral_r_at[next_obs] = obs_a.integral_r;
          if (anti) {
            obs_b.x[next_obs] = b.x;
            obs_b.v[next_obs] = std::max(b.v, 0.0);
            obs_b.r[next_obs] = std::max(b.r, 0.0);
            obs_b.integral_r_at[next_obs] = obs_b.integral_r;
          }
          ++next_obs;
        }
      };
      record(0);

      for (long step = 0; step < total_steps; ++step) {
        double z1 = 0.0, z2 = 0.0, z3 = 0.0, g = 0.0, zj = 0.0;
        if (!engine.randomness_off) {
          z1 = rng.normal();
          z2 = rng.normal();
          z3 = rng.normal();
          if (engine.jumps) {
            g = rng.gamma(gamma_shape) * engine.vg.clock_var;
            zj = rng.normal();
          }
        }
        const double b_t = engine.b_by_step.empty()
                               ? 0.0
                               : engine.b_by_step[static_cast<std::size_t>(step)];
        const double ra0 = std::max(a.r, 0.0);
        advance(engine, a, dt, sqdt, b_t, z1, z2, z3, g, zj);
        obs_a.integral_r += 0.5 * dt * (ra0 + std::max(a.r, 0.0));
        if (anti) {
          const double rb0 = std::max(b.r, 0.0);
          advance(engine, b, dt, sqdt, b_t, -z1, -z2, -z3, g, -zj);
          obs_b.integral_r += 0.5 * dt * (rb0 + std::max(b.r, 0.0));
        }
        record(step + 1);
      }

      for (std::size_t f = 0; f < fns.size(); ++f) {
        double value = fns[f](obs_a);
        if (anti) value = 0.5 * (value + fns[f](obs_b));
        results[f][static_cast<std::size_t>(unit)] = value;
      }
    }
  };

  int workers = vc.threads > 0
                    ? vc.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(
      std::max<std::int64_t>(1, std::min<std::int64_t>(workers, units)));
  if (workers == 1) {
    run_units(0, units);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t block = (units + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t lo = w * block;
      const std::int64_t hi = std::min(units, lo + block);
      if (lo >= hi) break;
      pool.emplace_back(run_units, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  std::vector<McEstimate> out;
  out.reserve(fns.size());
  for (const auto& column : results) out.push_back(summarize(column, vc.paths));
  return out;
}

Engine make_engine(const ForwardParams& p, const SimConfig& cfg,
                   long total_steps) {
  Engine e;
  e.x_drift_is_rate = true;
  e.kappa = p.kappa;
  e.theta = p.theta;
  e.sigma = p.sigma;
  e.alpha = p.alpha;
  e.beta = p.beta;
  e.eta = p.eta;
  e.chol = correlate(p.corr);
  e.full_mode = p.corr.mode == CorrelationMode::Full;
  e.rho13 = p.corr.rho13;
  e.rho23 = p.corr.rho23;
  e.vg = p.vg;
  e.randomness_off = cfg.randomness_off;
  e.milstein = cfg.scheme == McScheme::Milstein;
  e.jumps = !cfg.randomness_off && p.vg.bm_vol > 0.0 && p.vg.clock_var > 0.0;
  if (e.jumps) e.psi1 = char_exponent(1.0, p.vg);
  if (cfg.measure == McMeasure::Forward && !cfg.randomness_off) {
    const double dt = 1.0 / static_cast<double>(cfg.steps_per_year);
    e.b_by_step.resize(static_cast<std::size_t>(total_steps));
    for (long k = 0; k < total_steps; ++k) {
      const double t = std::min(static_cast<double>(k) * dt, p.maturity);
      e.b_by_step[static_cast<std::size_t>(k)] = bond_b(t, p.maturity, p);
    }
  }
  return e;
}

}  // namespace

SimConfig validate(const SimConfig& cfg) {
  if (cfg.paths < 1)
    throw ValidationError(ErrorCode::ConfigError, "mc: paths >= 1 required");
  if (cfg.steps_per_year < 12)
    throw ValidationError(ErrorCode::ConfigError,
                          "mc: steps_per_year >= 12 required");
  return cfg;
}

std::vector<McEstimate> mc_run(const ForwardParams& p, const SimConfig& cfg,
                               const std::vector<double>& obs_times,
                               const std::vector<PathFunctional>& functionals) {
  const ForwardParams vp = validate(p);
  const SimConfig vc = validate(cfg);
  if (cfg.measure == McMeasure::Physical)
    throw ValidationError(ErrorCode::ConfigError,
                          "physical-measure runs take PhysicalParams");
  const std::vector<long> idx = step_indices(obs_times, vc.steps_per_year, 1);
  Engine e = make_engine(vp, vc, idx.back());
  return run_engine(e, vc, obs_times, functionals, std::log(vp.s0), vp.v0,
                    vp.r0, 1);
}

std::vector<McEstimate> mc_run(const PhysicalParams& p, const VgParams& vg,
                               const SimConfig& cfg,
                               const std::vector<double>& obs_times,
                               const std::vector<PathFunctional>& functionals) {
  // full truncation keeps the scheme well defined even when the variance
  // process can touch zero, so the premium parameter sets are admissible
  const PhysicalParams vp = validate(p, /*require_feller=*/false);
  const SimConfig vc = validate(cfg);
  Engine e;
  e.x_drift_is_rate = false;
  e.x_drift_const = vp.mu;
  e.kappa = vp.kappa;
  e.theta = vp.theta;
  e.sigma = vp.sigma;
  e.alpha = vp.alpha;
  e.beta = vp.beta;
  e.eta = vp.eta;
  e.chol = correlate(vp.corr);
  e.full_mode = vp.corr.mode == CorrelationMode::Full;
  e.rho13 = 0.0;  // no numeraire drift under P
  e.rho23 = 0.0;
  e.vg = vg;
  e.randomness_off = vc.randomness_off;
  e.milstein = vc.scheme == McScheme::Milstein;
  e.jumps = !vc.randomness_off && vg.bm_vol > 0.0 && vg.clock_var > 0.0;
  if (e.jumps) e.psi1 = char_exponent(1.0, vg);
  return run_engine(e, vc, obs_times, functionals, std::log(vp.s0), vp.v0,
                    vp.r0, 1);
}

McEstimate mc_fair_strike(const SwapContract& c, const ForwardParams& p,
                          const SimConfig& cfg) {
  const SwapContract vc = validate(c);
  const ForwardParams vp = validate(p);
  const SimConfig vcfg = validate(cfg);
  const std::vector<double> times = vc.sampling_times();
  const long min_steps = vcfg.randomness_off ? 1 : 4;
  const std::vector<long> idx =
      step_indices(times, vcfg.steps_per_year, min_steps);
  Engine e = make_engine(vp, vcfg, idx.back());
  const int m = vc.moment_order;
  const double notional = vc.notional;
  PathFunctional payoff = [m, notional](const PathObservation& obs) {
    double acc = 0.0;
    for (std::size_t i = 1; i < obs.x.size(); ++i) {
      const double ret = obs.x[i] - obs.x[i - 1];
      double pw = 1.0;
      for (int j = 0; j < m; ++j) pw *= ret;
      acc += pw;
    }
    return notional * acc;
  };
  return run_engine(e, vcfg, times, {payoff}, std::log(vp.s0), vp.v0, vp.r0,
                    min_steps)
      .front();
}

McEstimate mc_expectation(const PathFunctional& f, const ForwardParams& p,
                          const SimConfig& cfg,
                          const std::vector<double>& obs_times) {
  return mc_run(p, cfg, obs_times, {f}).front();
}

}  // namespace vswap
