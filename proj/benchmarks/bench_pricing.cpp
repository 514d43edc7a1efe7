#include <benchmark/benchmark.h>

#include "vswap/affine_mgf.hpp"
#include "vswap/mc_engine.hpp"
#include "vswap/swap_pricer.hpp"

namespace {

using namespace vswap;

ForwardParams desk() {
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
  p.maturity = 1.0;
  p.vg = {0.001, 0.001, 0.01};
  return p;
}

void BM_SolveLeg(benchmark::State& state) {
  const ForwardParams p = desk();
  for (auto _ : state) {
    const LegSolution leg = solve_leg(0.0, 1.0, {-0.5, 0.0, 0.0, 0.0}, p);
    benchmark::DoNotOptimize(leg.start.level);
  }
}
BENCHMARK(BM_SolveLeg);

void BM_FairStrike(benchmark::State& state) {
  const ForwardParams p = desk();
  SwapContract c;
  c.maturity = 1.0;
  c.samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const StrikeResult res = fair_strike(c, p);
    benchmark::DoNotOptimize(res.strike);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FairStrike)->Arg(12)->Arg(52)->Arg(252)->Complexity();

void BM_McFairStrike(benchmark::State& state) {
  const ForwardParams p = desk();
  SwapContract c;
  c.maturity = 1.0;
  c.samples = 12;
  SimConfig cfg;
  cfg.paths = state.range(0);
  cfg.steps_per_year = 504;
  cfg.seed = 1;
  for (auto _ : state) {
    const McEstimate est = mc_fair_strike(c, p, cfg);
    benchmark::DoNotOptimize(est.mean);
  }
  state.SetItemsProcessed(state.iterations() * cfg.paths * 504);
}
BENCHMARK(BM_McFairStrike)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
