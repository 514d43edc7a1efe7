// Batch front end: load a config, run one pricing / simulation / comparison
// job, emit CSV on stdout or into --out.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vswap/cir_bond.hpp"
#include "vswap/cir_sqrt_moments.hpp"
#include "vswap/config.hpp"
#include "vswap/equilibrium.hpp"
#include "vswap/mc_engine.hpp"
#include "vswap/swap_pricer.hpp"

namespace {

using namespace vswap;

struct CliArgs {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string dump_path;
  std::optional<std::uint64_t> seed;
  std::optional<CorrelationMode> mode;
  std::optional<Nesting> nesting;
  bool annualize = false;
  bool show_help = false;
};

void print_usage() {
  std::cout <<
      "Usage: vswap <command> [options]\n"
      "\n"
      "Commands:\n"
      "  price      fair strike of the moment swap, per-period contributions\n"
      "  compare    analytic strike vs Monte Carlo over a path-count ladder\n"
      "  premium    expected equity premium curves per risk aversion\n"
      "  bond       zero-coupon bond table A, B, P vs Monte Carlo\n"
      "  simulate   Monte Carlo summary of the forward-measure system\n"
      "  fit-abc    exponential fit of the sqrt-mean curves\n"
      "\n"
      "Options:\n"
      "  --config PATH     job config file (flat key = value sections)\n"
      "  --out PATH        write CSV here instead of stdout\n"
      "  --seed N          override mc.seed\n"
      "  --mode M          partial | full\n"
      "  --nesting N       absolute | paper_literal\n"
      "  --annualize       divide realized-variance strikes by the maturity\n"
      "  --dump PATH       (simulate) terminal per-path states, up to 1000\n"
      "  --help            this text\n";
}

CliArgs parse_args(int argc, char** argv) {
  CliArgs args;
  if (argc < 2) {
    args.show_help = true;
    return args;
  }
  args.command = argv[1];
  if (args.command == "--help" || args.command == "-h") {
    args.show_help = true;
    return args;
  }
  for (int i = 2; i < argc; ++i) {
    const std::string a = argv[i];
    auto need_value = [&](const char* flag) -> std::string {
      if (i + 1 >= argc)
        throw ValidationError(ErrorCode::ConfigError,
                              std::string("missing value for ") + flag);
      return argv[++i];
    };
    if (a == "--config") args.config_path = need_value("--config");
    else if (a == "--out") args.out_path = need_value("--out");
    else if (a == "--dump") args.dump_path = need_value("--dump");
    else if (a == "--seed") args.seed = std::stoull(need_value("--seed"));
    else if (a == "--mode") {
      const std::string v = need_value("--mode");
      if (v == "partial") args.mode = CorrelationMode::Partial;
      else if (v == "full") args.mode = CorrelationMode::Full;
      else throw ValidationError(ErrorCode::ConfigError, "unknown --mode " + v);
    } else if (a == "--nesting") {
      const std::string v = need_value("--nesting");
      if (v == "absolute") args.nesting = Nesting::Absolute;
      else if (v == "paper_literal") args.nesting = Nesting::PaperLiteral;
      else throw ValidationError(ErrorCode::ConfigError, "unknown --nesting " + v);
    } else if (a == "--annualize") args.annualize = true;
    else if (a == "--help") args.show_help = true;
    else throw ValidationError(ErrorCode::ConfigError, "unknown argument " + a);
  }
  return args;
}

JobConfig effective_config(const CliArgs& args) {
  JobConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  if (args.seed) cfg.mc_seed = *args.seed;
  if (args.mode) cfg.mode = *args.mode;
  if (args.nesting) cfg.nesting = *args.nesting;
  if (args.annualize) cfg.annualize = true;
  return cfg;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw ValidationError(ErrorCode::ConfigError,
                              "cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

int cmd_price(const CliArgs& args) {
  const JobConfig cfg = effective_config(args);
  const ForwardParams p = forward_params(cfg);
  const SwapContract contract = swap_contract(cfg);
  const StrikeResult res = fair_strike(contract, p, pricer_options(cfg));
  const double scale = cfg.annualize ? 1.0 / contract.maturity : 1.0;
  const std::vector<double> times = contract.sampling_times();

  Output out(args.out_path);
  auto& os = out.stream();
  os << "# vswap price v1; contributions in variance units"
     << (cfg.annualize ? " (annualized)" : "") << "\n";
  os << "period,t_years,contribution\n";
  for (std::size_t i = 0; i < res.contributions.size(); ++i)
    os << (i + 1) << "," << fmt(times[i + 1]) << ","
       << fmt(contract.notional * res.contributions[i] * scale) << "\n";
  os << "total," << fmt(contract.maturity) << "," << fmt(res.strike * scale)
     << "\n";
  return 0;
}

int cmd_compare(const CliArgs& args) {
  const JobConfig cfg = effective_config(args);
  const ForwardParams p = forward_params(cfg);
  const SwapContract contract = swap_contract(cfg);
  const double scale = cfg.annualize ? 1.0 / contract.maturity : 1.0;
  const double analytic =
      fair_strike(contract, p, pricer_options(cfg)).strike * scale;

  std::vector<std::int64_t> ladder{cfg.mc_paths / 20, cfg.mc_paths / 4,
                                   cfg.mc_paths};
  for (auto& rung : ladder) rung = std::max<std::int64_t>(rung, 100);

  Output out(args.out_path);
  auto& os = out.stream();
  os << "# vswap compare v1; strikes in variance units\n";
  os << "paths,mc_strike,mc_stderr,analytic_strike,rel_diff\n";
  SimConfig sim = sim_config(cfg);
  for (std::int64_t rung : ladder) {
    sim.paths = rung;
    const McEstimate mc = mc_fair_strike(contract, p, sim);
    const double mc_val = mc.mean * scale;
    os << rung << "," << fmt(mc_val) << "," << fmt(mc.stderr_ * scale) << ","
       << fmt(analytic) << "," << fmt(std::abs(mc_val - analytic) / analytic)
       << "\n";
  }
  return 0;
}

int cmd_premium(const CliArgs& args) {
  const JobConfig cfg = effective_config(args);
  const PhysicalParams p = physical_params(cfg);
  const VgParams vg = vg_params(cfg);

  Output out(args.out_path);
  auto& os = out.stream();
  os << "# vswap premium v1; values per year\n";
  os << "series,vartheta,t_years,value\n";

  const int n = std::max(cfg.premium_t_points, 2);
  for (double vt : cfg.premium_vartheta_list) {
    RiskPrices rp = risk_prices(cfg);
    rp.vartheta = vt;
    for (int j = 0; j < n; ++j) {
      const double t = cfg.premium_t_max * static_cast<double>(j) /
                       static_cast<double>(n - 1);
      os << "expectation," << fmt(vt) << "," << fmt(t) << ","
         << fmt(expected_premium(t, p, rp, vg)) << "\n";
    }
  }

  if (cfg.premium_paths_out > 0) {
    // simulated premium paths under the physical measure
    const int keep = std::min(cfg.premium_paths_out, 1000);
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      grid[static_cast<std::size_t>(j)] = cfg.premium_t_max *
                                          static_cast<double>(j) /
                                          static_cast<double>(n - 1);
    RiskPrices rp = risk_prices(cfg);
    std::vector<std::vector<double>> paths;
    PathFunctional collect = [&paths, keep](const PathObservation& obs) {
      if (static_cast<int>(paths.size()) < keep) paths.push_back(obs.v);
      return 0.0;
    };
    SimConfig sim = sim_config(cfg);
    sim.paths = keep;
    sim.antithetic = false;
    sim.threads = 1;  // the collector appends in path order
    mc_run(p, vg, sim, grid, {collect});
    for (std::size_t j = 0; j < paths.size(); ++j)
      for (std::size_t k = 0; k < grid.size(); ++k)
        os << "path_" << j << "," << fmt(rp.vartheta) << "," << fmt(grid[k])
           << ","
           << fmt(equity_premium(paths[j][k], rp, vg, rp.hjb_i,
                                 p.corr.stock_variance(), p.sigma))
           << "\n";
  }
  return 0;
}

int cmd_bond(const CliArgs& args) {
  const JobConfig cfg = effective_config(args);
  const ForwardParams p = forward_params(cfg);

  // maturity grid snapped onto the Monte Carlo step grid
  const int points = 10;
  const double spy = static_cast<double>(cfg.mc_steps_per_year);
  std::vector<double> grid;
  for (int k = 0; k <= points; ++k) {
    const double want = cfg.maturity * static_cast<double>(k) /
                        static_cast<double>(points);
    const double snapped = std::round(want * spy) / spy;
    if (grid.empty() || snapped > grid.back()) grid.push_back(snapped);
  }

  // discount factors to every grid maturity, all on the same risk-neutral
  // paths
  std::vector<PathFunctional> fns;
  for (std::size_t k = 0; k < grid.size(); ++k)
    fns.push_back([k](const PathObservation& obs) {
      return std::exp(-obs.integral_r_at[k]);
    });
  SimConfig sim = sim_config(cfg);
  sim.measure = McMeasure::RiskNeutral;
  const std::vector<McEstimate> mc = mc_run(p, sim, grid, fns);

  Output out(args.out_path);
  auto& os = out.stream();
  os << "# vswap bond v1; B in years\n";
  os << "maturity_years,A,B_years,price,mc_price,mc_stderr,rel_diff\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const BondCoefficients c = bond_coefficients(0.0, grid[k], p);
    const double price = c.a * std::exp(-c.b * p.r0);
    const double rel = std::abs(mc[k].mean - price) / price;
    os << fmt(grid[k]) << "," << fmt(c.a) << "," << fmt(c.b) << ","
       << fmt(price) << "," << fmt(mc[k].mean) << "," << fmt(mc[k].stderr_)
       << "," << fmt(rel) << "\n";
  }
  return 0;
}

int cmd_simulate(const CliArgs& args) {
  const JobConfig cfg = effective_config(args);
  const ForwardParams p = forward_params(cfg);
  const SwapContract contract = swap_contract(cfg);
  const std::vector<double> grid = contract.sampling_times();

  const int m = contract.moment_order;
  std::vector<PathFunctional> fns{
      [](const PathObservation& o) { return o.x.back(); },
      [](const PathObservation& o) { return o.v.back(); },
      [](const PathObservation& o) { return o.r.back(); },
      [](const PathObservation& o) { return std::exp(o.x.back()); },
      [](const PathObservation& o) { return std::exp(-o.integral_r); },
      [m](const PathObservation& o) {
        double acc = 0.0;
        for (std::size_t i = 1; i < o.x.size(); ++i) {
          double pw = 1.0;
          for (int j = 0; j < m; ++j) pw *= o.x[i] - o.x[i - 1];
          acc += pw;
        }
        return acc;
      }};

  std::vector<std::array<double, 3>> dump;
  SimConfig sim = sim_config(cfg);
  if (!args.dump_path.empty()) {
    sim.threads = 1;  // the collector appends in path order
    fns.push_back([&dump](const PathObservation& o) {
      if (dump.size() < 1000)
        dump.push_back({o.x.back(), o.v.back(), o.r.back()});
      return 0.0;
    });
  }

  const std::vector<McEstimate> est = mc_run(p, sim, grid, fns);

  Output out(args.out_path);
  auto& os = out.stream();
  os << "# vswap simulate v1\n";
  os << "quantity,mean,stderr,paths\n";
  const char* names[] = {"x_terminal",       "v_terminal", "r_terminal",
                         "s_terminal",       "discount",   "realized_moment_sum"};
  for (std::size_t i = 0; i < 6; ++i)
    os << names[i] << "," << fmt(est[i].mean) << "," << fmt(est[i].stderr_)
       << "," << est[i].paths << "\n";

  if (!args.dump_path.empty()) {
    std::ofstream df(args.dump_path);
    if (!df)
      throw ValidationError(ErrorCode::ConfigError,
                            "cannot open dump file " + args.dump_path);
    df << "path,x_terminal,v_terminal,r_terminal\n";
    for (std::size_t j = 0; j < dump.size(); ++j)
      df << j << "," << fmt(dump[j][0]) << "," << fmt(dump[j][1]) << ","
         << fmt(dump[j][2]) << "\n";
  }
  return 0;
}

int cmd_fit_abc(const CliArgs& args) {
  const JobConfig cfg = effective_config(args);
  const ForwardParams p = forward_params(cfg);
  const CirMomentSpec spec_v{p.kappa, p.theta, p.sigma, p.v0};
  const CirMomentSpec spec_r{p.alpha, p.beta, p.eta, p.r0};

  Output out(args.out_path);
  auto& os = out.stream();
  os << "# vswap fit-abc v1; sqrt-process moment curves\n";
  struct Row {
    const char* name;
    const CirMomentSpec* spec;
  } rows[] = {{"v", &spec_v}, {"r", &spec_r}};
  for (const auto& row : rows) {
    const ExpFit fit = fit_exp_decay(*row.spec, cfg.b_convention);
    os << "# " << row.name << ": a=" << fmt(fit.a) << " b=" << fmt(fit.b)
       << " c=" << fmt(fit.c) << "\n";
  }
  os << "process,t_years,sqrt_mean_series,omega1,omega2,psi\n";
  for (const auto& row : rows) {
    const ExpFit fit = fit_exp_decay(*row.spec, cfg.b_convention);
    for (int k = 1; k <= 40; ++k) {
      const double t = 0.05 * static_cast<double>(k);
      os << row.name << "," << fmt(t) << ","
         << fmt(sqrt_mean_series(t, *row.spec)) << ","
         << fmt(sqrt_mean_approx(t, *row.spec)) << "," << fmt(fit.value(t))
         << "," << fmt(sqrt_variance_approx(t, *row.spec)) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliArgs args;
  try {
    args = parse_args(argc, argv);
    if (args.show_help) {
      print_usage();
      return 0;
    }
    if (args.command == "price") return cmd_price(args);
    if (args.command == "compare") return cmd_compare(args);
    if (args.command == "premium") return cmd_premium(args);
    if (args.command == "bond") return cmd_bond(args);
    if (args.command == "simulate") return cmd_simulate(args);
    if (args.command == "fit-abc") return cmd_fit_abc(args);
    std::cerr << "error: unknown command '" << args.command << "'\n";
    print_usage();
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
