#ifndef VSWAP_MC_ENGINE_HPP
#define VSWAP_MC_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "vswap/params.hpp"
#include "vswap/swap_pricer.hpp"

namespace vswap {

enum class McScheme { EulerFullTruncation, Milstein };

// Which dynamics drive the simulation: the T-forward measure carries the
// -B(t,T) eta^2 r drift on the rate (and the cross drifts in full
// correlation mode), the risk-neutral measure does not, and the physical
// measure replaces the rate by mu in the stock drift.
enum class McMeasure { Forward, RiskNeutral, Physical };

struct SimConfig {
  std::int64_t paths = 200000;
  int steps_per_year = 1008;
  std::uint64_t seed = 1;
  McScheme scheme = McScheme::EulerFullTruncation;
  bool antithetic = false;
  McMeasure measure = McMeasure::Forward;
  // all Brownian and jump increments forced to zero (drift-only dynamics)
  bool randomness_off = false;
  // worker threads; 0 picks the hardware count.  Results are identical for
  // any thread count: every path owns its stream and the reduction order is
  // fixed.  Functionals must be thread-safe when threads != 1.
  int threads = 0;
};

SimConfig validate(const SimConfig& cfg);

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample std / sqrt(paths)
  std::int64_t paths = 0;
};

// What a path functional gets to see: state at the observation times plus
// the trapezoidal integral of the rate over the full step grid.
struct PathObservation {
  const std::vector<double>* times = nullptr;  // observation grid
  std::vector<double> x;  // log price
  std::vector<double> v;  // variance, clipped at 0
  std::vector<double> r;  // rate, clipped at 0
  // trapezoidal int_0^{t_i} r dt at each observation time
  std::vector<double> integral_r_at;
  double integral_r = 0.0;  // over the whole horizon
};

using PathFunctional = std::function<double(const PathObservation&)>;

// Simulates the three-factor system (Euler with full truncation; exact
// per-step VG increments with the psi(1) dt compensator) and returns one
// estimate per functional, all evaluated on the same paths.  `obs_times`
// must start at 0 and land exactly on the step grid.
std::vector<McEstimate> mc_run(const ForwardParams& p, const SimConfig& cfg,
                               const std::vector<double>& obs_times,
                               const std::vector<PathFunctional>& functionals);

// Physical-measure variant used by the premium experiments (only V and r
// dynamics differ through mu; jumps and correlations are shared).
std::vector<McEstimate> mc_run(const PhysicalParams& p, const VgParams& vg,
                               const SimConfig& cfg,
                               const std::vector<double>& obs_times,
                               const std::vector<PathFunctional>& functionals);

// NA * sum_i (X_{t_i} - X_{t_{i-1}})^m averaged over paths.  Requires every
// sampling interval to hold an integer number (>= 4) of steps; otherwise
// throws ValidationError(GridMismatch).
McEstimate mc_fair_strike(const SwapContract& c, const ForwardParams& p,
                          const SimConfig& cfg);

// Sample mean and stderr of an arbitrary functional.
McEstimate mc_expectation(const PathFunctional& f, const ForwardParams& p,
                          const SimConfig& cfg,
                          const std::vector<double>& obs_times);

}  // namespace vswap

#endif
