#ifndef VSWAP_CONFIG_HPP
#define VSWAP_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vswap/equilibrium.hpp"
#include "vswap/mc_engine.hpp"
#include "vswap/params.hpp"
#include "vswap/swap_pricer.hpp"

namespace vswap {

enum class ParameterTier { RiskNeutral, Physical };

// One batch job: model, contract, run flags and Monte Carlo settings, read
// from a flat `key = value` file with named sections.  Unknown sections or
// keys are rejected.  The defaults are the desk parameter set the numerical
// experiments use.
struct JobConfig {
  // [model]
  ParameterTier tier = ParameterTier::RiskNeutral;
  double s0 = 1.0;
  double v0 = 0.05;
  double r0 = 0.05;
  double kappa = 2.0;
  double theta = 0.05;
  double sigma = 0.1;
  double alpha = 1.2;
  double beta = 0.05;
  double eta = 0.01;
  double rho = -0.40;
  double rho12 = -0.40;
  double rho13 = 0.0;
  double rho23 = 0.0;
  double mu = 0.10;

  // [risk]
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double vartheta = 2.0;
  double delta = 0.03;

  // [vg]
  double vg_drift = 0.001;
  double vg_vol = 0.001;
  double vg_variance_rate = 0.01;

  // [contract]
  double maturity = 1.0;
  int samples = 252;
  double notional = 1.0;
  int moment_order = 2;

  // [run]
  CorrelationMode mode = CorrelationMode::Partial;
  Nesting nesting = Nesting::Absolute;
  GammaConvention gamma_convention = GammaConvention::Printed;
  BConvention b_convention = BConvention::Difference;
  DQuadratic d_quadratic = DQuadratic::Eta2;
  bool annualize = false;
  bool randomness_off = false;
  double fd_step = 1e-4;

  // [mc]
  std::int64_t mc_paths = 200000;
  int mc_steps_per_year = 1008;
  std::uint64_t mc_seed = 1;
  bool mc_antithetic = false;
  McScheme mc_scheme = McScheme::EulerFullTruncation;

  // [premium]
  std::vector<double> premium_vartheta_list = {1.5, 2.0, 3.0};
  double premium_t_max = 5.0;
  int premium_t_points = 101;
  int premium_paths_out = 0;
};

JobConfig parse_config(std::istream& in);
JobConfig load_config(const std::string& path);

VgParams vg_params(const JobConfig& cfg);
RiskPrices risk_prices(const JobConfig& cfg);
PhysicalParams physical_params(const JobConfig& cfg);

// Forward-measure parameters for pricing.  With tier = physical this runs
// the whole chain P -> Q -> Q^T, solving the HJB system for I when the
// partial-correlation measure change needs it.
ForwardParams forward_params(const JobConfig& cfg);

SwapContract swap_contract(const JobConfig& cfg);
SimConfig sim_config(const JobConfig& cfg);
PricerOptions pricer_options(const JobConfig& cfg);

}  // namespace vswap

#endif
