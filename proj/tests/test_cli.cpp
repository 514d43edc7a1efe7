// Drives the built binary end to end through small configs.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(VSWAP_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WEXITSTATUS(status);
  return res;
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/vswap_test_" + name + ".ini";
  std::ofstream out(path);
  out << body;
  return path;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

const char* kSmallJob =
    "[contract]\n"
    "samples = 4\n"
    "[mc]\n"
    "paths = 2000\n"
    "steps_per_year = 96\n"
    "seed = 5\n";

}  // namespace

TEST_CASE("price command emits one row per period plus the total") {
  const std::string cfg = write_config("price", kSmallJob);
  const RunResult res = run_cli("price --config " + cfg);
  CHECK(res.exit_code == 0);
  // comment header + column header + 4 contributions + total
  CHECK(count_lines(res.output) == 7);
  CHECK(res.output.find("period,t_years,contribution") != std::string::npos);
  CHECK(res.output.find("total,") != std::string::npos);
}

TEST_CASE("price with a feller-violating config exits 2 and names the bound") {
  const std::string cfg = write_config(
      "feller",
      "[model]\nsigma = 0.5\nkappa = 1.0\ntheta = 0.01\n");
  const RunResult res = run_cli("price --config " + cfg);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("Feller") != std::string::npos);
}

TEST_CASE("single-period contract prices") {
  const std::string cfg = write_config(
      "single", "[contract]\nsamples = 1\n[mc]\npaths = 100\n");
  const RunResult res = run_cli("price --config " + cfg);
  CHECK(res.exit_code == 0);
  CHECK(count_lines(res.output) == 4);
}

TEST_CASE("compare command is deterministic given the seed") {
  const std::string cfg = write_config("compare", kSmallJob);
  const RunResult a = run_cli("compare --config " + cfg);
  const RunResult b = run_cli("compare --config " + cfg);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("paths,mc_strike,mc_stderr,analytic_strike,rel_diff") !=
        std::string::npos);
  // ladder of three path counts
  CHECK(count_lines(a.output) == 5);
}

TEST_CASE("premium command needs rho = 0 and orders curves by vartheta") {
  const std::string bad = write_config(
      "premium_bad", "[model]\ntier = physical\nrho = -0.4\n");
  CHECK(run_cli("premium --config " + bad).exit_code == 2);

  const std::string good = write_config(
      "premium",
      "[model]\ntier = physical\nrho = 0\nkappa = 0.3\nsigma = 0.2\n"
      "v0 = 0.035\n"
      "[vg]\ndrift = 0.02\nvol = 0.04\nvariance_rate = 0.01\n"
      "[premium]\nvartheta_list = 1.5, 2, 3\nt_points = 11\nt_max = 5\n");
  const RunResult res = run_cli("premium --config " + good);
  CHECK(res.exit_code == 0);
  CHECK(count_lines(res.output) == 2 + 3 * 11);

  // first row of each curve is vartheta * V0 + jump integral: increasing
  std::istringstream in(res.output);
  std::string line;
  std::vector<double> at_zero;
  while (std::getline(in, line)) {
    if (line.rfind("expectation,", 0) == 0 &&
        line.find(",0,") != std::string::npos)
      at_zero.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  }
  REQUIRE(at_zero.size() == 3);
  CHECK(at_zero[0] < at_zero[1]);
  CHECK(at_zero[1] < at_zero[2]);
}

TEST_CASE("bond command emits the maturity table") {
  const std::string cfg = write_config(
      "bond", "[mc]\npaths = 4000\nsteps_per_year = 120\n");
  const RunResult res = run_cli("bond --config " + cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("maturity_years,A,B_years,price,mc_price") !=
        std::string::npos);
  // T = 0 row prices at exactly 1
  CHECK(res.output.find("0,1,0,1,1,") != std::string::npos);
}

TEST_CASE("simulate runs and honors --dump") {
  const std::string cfg = write_config("simulate", kSmallJob);
  const RunResult res =
      run_cli("simulate --config " + cfg + " --dump /tmp/vswap_dump.csv");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("s_terminal") != std::string::npos);
  std::ifstream dump("/tmp/vswap_dump.csv");
  REQUIRE(dump.good());
  int rows = 0;
  std::string line;
  while (std::getline(dump, line)) ++rows;
  CHECK(rows == 1001);  // header + capped path count
}

TEST_CASE("fit-abc emits both processes") {
  const RunResult res = run_cli("fit-abc");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("process,t_years,sqrt_mean_series") !=
        std::string::npos);
  CHECK(res.output.find("\nv,") != std::string::npos);
  CHECK(res.output.find("\nr,") != std::string::npos);
}

TEST_CASE("unknown commands and flags fail cleanly") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("price --frobnicate").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("analytic strike column rises across a rate-level sweep") {
  // deterministic rate variant: eta = 0, alpha small, sweep beta
  std::vector<double> strikes;
  for (double beta : {0.03, 0.05, 0.07}) {
    std::ostringstream body;
    body << "[model]\neta = 0\nbeta = " << beta
         << "\n[contract]\nsamples = 12\n[mc]\npaths = 200\nsteps_per_year = 96\n";
    const std::string cfg =
        write_config("sweep" + std::to_string(strikes.size()), body.str());
    const RunResult res = run_cli("compare --config " + cfg);
    REQUIRE(res.exit_code == 0);
    // analytic column of the last ladder row
    std::istringstream in(res.output);
    std::string line, last;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#' && line.find("paths,") != 0)
        last = line;
    std::vector<double> cols;
    std::stringstream ss(last);
    std::string item;
    while (std::getline(ss, item, ',')) cols.push_back(std::stod(item));
    REQUIRE(cols.size() == 5);
    strikes.push_back(cols[3]);
  }
  CHECK(strikes[0] < strikes[1]);
  CHECK(strikes[1] < strikes[2]);
}

TEST_CASE("annualize divides the strike by the maturity") {
  const char* body =
      "[contract]\nsamples = 4\nmaturity = 2\n[mc]\npaths = 100\n";
  const std::string cfg = write_config("annualize", body);
  auto total_of = [](const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("total,", 0) == 0)
        return std::stod(line.substr(line.rfind(',') + 1));
    return -1.0;
  };
  const RunResult plain = run_cli("price --config " + cfg);
  const RunResult ann = run_cli("price --config " + cfg + " --annualize");
  REQUIRE(plain.exit_code == 0);
  REQUIRE(ann.exit_code == 0);
  CHECK(std::abs(total_of(plain.output) - 2.0 * total_of(ann.output)) <=
        1e-12);
}

TEST_CASE("output lands in --out") {
  const std::string cfg = write_config("out", kSmallJob);
  const RunResult res =
      run_cli("price --config " + cfg + " --out /tmp/vswap_out.csv");
  CHECK(res.exit_code == 0);
  CHECK(res.output.empty());
  std::ifstream out("/tmp/vswap_out.csv");
  REQUIRE(out.good());
  std::string first;
  std::getline(out, first);
  CHECK(first.rfind("# vswap price", 0) == 0);
}
