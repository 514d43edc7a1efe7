#include "vswap/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace vswap {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad(const std::string& msg) {
  throw ValidationError(ErrorCode::ConfigError, "config: " + msg);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad("cannot parse number for '" + key + "'");
  }
  if (used != v.size()) bad("trailing characters after number for '" + key + "'");
  if (!std::isfinite(x)) bad("non-finite value for '" + key + "'");
  return x;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    bad("cannot parse integer for '" + key + "'");
  }
  if (used != v.size()) bad("trailing characters after integer for '" + key + "'");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    bad("cannot parse unsigned integer for '" + key + "'");
  }
  if (used != v.size()) bad("trailing characters for '" + key + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad("cannot parse boolean for '" + key + "'");
}

std::vector<double> to_double_list(const std::string& key,
                                   const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) bad("empty list element for '" + key + "'");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) bad("empty list for '" + key + "'");
  return out;
}

void apply(JobConfig& cfg, const std::string& section, const std::string& key,
           const std::string& value) {
  const std::string where = section + "." + key;
  if (section == "model") {
    if (key == "tier") {
      if (value == "risk_neutral") cfg.tier = ParameterTier::RiskNeutral;
      else if (value == "physical") cfg.tier = ParameterTier::Physical;
      else bad("unknown tier '" + value + "'");
    } else if (key == "s0") cfg.s0 = to_double(where, value);
    else if (key == "v0") cfg.v0 = to_double(where, value);
    else if (key == "r0") cfg.r0 = to_double(where, value);
    else if (key == "kappa") cfg.kappa = to_double(where, value);
    else if (key == "theta") cfg.theta = to_double(where, value);
    else if (key == "sigma") cfg.sigma = to_double(where, value);
    else if (key == "alpha") cfg.alpha = to_double(where, value);
    else if (key == "beta") cfg.beta = to_double(where, value);
    else if (key == "eta") cfg.eta = to_double(where, value);
    else if (key == "rho") cfg.rho = to_double(where, value);
    else if (key == "rho12") cfg.rho12 = to_double(where, value);
    else if (key == "rho13") cfg.rho13 = to_double(where, value);
    else if (key == "rho23") cfg.rho23 = to_double(where, value);
    else if (key == "mu") cfg.mu = to_double(where, value);
    else bad("unknown key '" + where + "'");
  } else if (section == "risk") {
    if (key == "lambda1") cfg.lambda1 = to_double(where, value);
    else if (key == "lambda2") cfg.lambda2 = to_double(where, value);
    else if (key == "vartheta") cfg.vartheta = to_double(where, value);
    else if (key == "delta") cfg.delta = to_double(where, value);
    else bad("unknown key '" + where + "'");
  } else if (section == "vg") {
    if (key == "drift") cfg.vg_drift = to_double(where, value);
    else if (key == "vol") cfg.vg_vol = to_double(where, value);
    else if (key == "variance_rate") cfg.vg_variance_rate = to_double(where, value);
    else bad("unknown key '" + where + "'");
  } else if (section == "contract") {
    if (key == "maturity") cfg.maturity = to_double(where, value);
    else if (key == "samples") cfg.samples = static_cast<int>(to_int(where, value));
    else if (key == "notional") cfg.notional = to_double(where, value);
    else if (key == "moment_order") cfg.moment_order = static_cast<int>(to_int(where, value));
    else bad("unknown key '" + where + "'");
  } else if (section == "run") {
    if (key == "mode") {
      if (value == "partial") cfg.mode = CorrelationMode::Partial;
      else if (value == "full") cfg.mode = CorrelationMode::Full;
      else bad("unknown mode '" + value + "'");
    } else if (key == "nesting") {
      if (value == "absolute") cfg.nesting = Nesting::Absolute;
      else if (value == "paper_literal") cfg.nesting = Nesting::PaperLiteral;
      else bad("unknown nesting '" + value + "'");
    } else if (key == "gamma_convention") {
      if (value == "printed") cfg.gamma_convention = GammaConvention::Printed;
      else if (value == "corrected") cfg.gamma_convention = GammaConvention::Corrected;
      else bad("unknown gamma_convention '" + value + "'");
    } else if (key == "b_convention") {
      if (value == "difference") cfg.b_convention = BConvention::Difference;
      else if (value == "printed") cfg.b_convention = BConvention::Printed;
      else bad("unknown b_convention '" + value + "'");
    } else if (key == "d_quadratic") {
      if (value == "eta2") cfg.d_quadratic = DQuadratic::Eta2;
      else if (value == "eta_printed") cfg.d_quadratic = DQuadratic::EtaPrinted;
      else bad("unknown d_quadratic '" + value + "'");
    } else if (key == "annualize") cfg.annualize = to_bool(where, value);
    else if (key == "randomness_off") cfg.randomness_off = to_bool(where, value);
    else if (key == "fd_step") cfg.fd_step = to_double(where, value);
    else bad("unknown key '" + where + "'");
  } else if (section == "mc") {
    if (key == "paths") cfg.mc_paths = to_int(where, value);
    else if (key == "steps_per_year") cfg.mc_steps_per_year = static_cast<int>(to_int(where, value));
    else if (key == "seed") cfg.mc_seed = to_uint(where, value);
    else if (key == "antithetic") cfg.mc_antithetic = to_bool(where, value);
    else if (key == "scheme") {
      if (value == "euler") cfg.mc_scheme = McScheme::EulerFullTruncation;
      else if (value == "milstein") cfg.mc_scheme = McScheme::Milstein;
      else bad("unknown scheme '" + value + "'");
    } else bad("unknown key '" + where + "'");
  } else if (section == "premium") {
    if (key == "vartheta_list") cfg.premium_vartheta_list = to_double_list(where, value);
    else if (key == "t_max") cfg.premium_t_max = to_double(where, value);
    else if (key == "t_points") cfg.premium_t_points = static_cast<int>(to_int(where, value));
    else if (key == "paths_out") cfg.premium_paths_out = static_cast<int>(to_int(where, value));
    else bad("unknown key '" + where + "'");
  } else {
    bad("unknown section '" + section + "'");
  }
}

}  // namespace

JobConfig parse_config(std::istream& in) {
  JobConfig cfg;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) bad("empty section name at line " + std::to_string(lineno));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) bad("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) bad("empty key or value at line " + std::to_string(lineno));
    if (section.empty()) bad("key outside any section at line " + std::to_string(lineno));
    apply(cfg, section, key, value);
  }
  return cfg;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  return parse_config(in);
}

VgParams vg_params(const JobConfig& cfg) {
  return {cfg.vg_drift, cfg.vg_vol, cfg.vg_variance_rate};
}

RiskPrices risk_prices(const JobConfig& cfg) {
  RiskPrices rp;
  rp.lambda1 = cfg.lambda1;
  rp.lambda2 = cfg.lambda2;
  rp.vartheta = cfg.vartheta;
  rp.delta = cfg.delta;
  return rp;
}

namespace {
Correlations correlations(const JobConfig& cfg) {
  Correlations c;
  c.mode = cfg.mode;
  c.rho = cfg.rho;
  c.rho12 = cfg.rho12;
  c.rho13 = cfg.rho13;
  c.rho23 = cfg.rho23;
  return c;
}
}  // namespace

PhysicalParams physical_params(const JobConfig& cfg) {
  PhysicalParams p;
  p.mu = cfg.mu;
  p.kappa = cfg.kappa;
  p.theta = cfg.theta;
  p.sigma = cfg.sigma;
  p.alpha = cfg.alpha;
  p.beta = cfg.beta;
  p.eta = cfg.eta;
  p.corr = correlations(cfg);
  p.s0 = cfg.s0;
  p.v0 = cfg.v0;
  p.r0 = cfg.r0;
  // the premium experiments run variance parameters whose paths can touch
  // zero; pricing re-validates strictly on the risk-neutral tier
  return validate(p, /*require_feller=*/false);
}

ForwardParams forward_params(const JobConfig& cfg) {
  if (cfg.tier == ParameterTier::RiskNeutral) {
    RiskNeutralParams q;
    q.kappa = cfg.kappa;
    q.theta = cfg.theta;
    q.sigma = cfg.sigma;
    q.alpha = cfg.alpha;
    q.beta = cfg.beta;
    q.eta = cfg.eta;
    q.corr = correlations(cfg);
    q.s0 = cfg.s0;
    q.v0 = cfg.v0;
    q.r0 = cfg.r0;
    q.vg = vg_params(cfg);
    return validate(to_forward(validate(q), cfg.maturity));
  }
  const PhysicalParams p = physical_params(cfg);
  RiskPrices rp = risk_prices(cfg);
  if (cfg.mode == CorrelationMode::Partial) {
    HjbOptions ho;
    ho.gamma_convention = cfg.gamma_convention;
    const HjbSolution hjb = solve_hjb(p, rp, vg_params(cfg), ho);
    rp.hjb_i = hjb.i;
    rp.hjb_k = hjb.k;
    rp.hjb_m = hjb.m;
  }
  const RiskNeutralParams q =
      validate(to_risk_neutral(p, rp, vg_params(cfg), cfg.mode));
  return validate(to_forward(q, cfg.maturity));
}

SwapContract swap_contract(const JobConfig& cfg) {
  SwapContract c;
  c.maturity = cfg.maturity;
  c.samples = cfg.samples;
  c.notional = cfg.notional;
  c.moment_order = cfg.moment_order;
  return validate(c);
}

SimConfig sim_config(const JobConfig& cfg) {
  SimConfig sc;
  sc.paths = cfg.mc_paths;
  sc.steps_per_year = cfg.mc_steps_per_year;
  sc.seed = cfg.mc_seed;
  sc.antithetic = cfg.mc_antithetic;
  sc.scheme = cfg.mc_scheme;
  sc.measure = McMeasure::Forward;
  sc.randomness_off = cfg.randomness_off;
  return validate(sc);
}

PricerOptions pricer_options(const JobConfig& cfg) {
  PricerOptions po;
  po.leg.nesting = cfg.nesting;
  po.leg.d_quadratic = cfg.d_quadratic;
  po.leg.drift_only = cfg.randomness_off;
  po.fd_step = cfg.fd_step;
  po.b_convention = cfg.b_convention;
  return po;
}

}  // namespace vswap
