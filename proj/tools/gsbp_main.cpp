// gsbp: command-line front end for the operator certification and the
// stability, convergence and Burgers experiments.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gsbp/cli.hpp"

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += sep;
    s += items[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upwind gSBP operators with IMEX time stepping for 1D advection-diffusion"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> degrees, cells, thetas, pair, orders, tableaux, times;
  std::string out, workers, horizon, seed, a, c, dt, mu, problem, tau_cap, resolution;
  bool quiet = false;

  app.add_option("--config", config_path, "flat key = value file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--horizon", horizon, "final time T");
  app.add_option("--seed", seed, "RNG seed (property tests only)");
  app.add_option("--N", degrees, "polynomial degree(s)")->delimiter(',');
  app.add_option("--K", cells, "cell count(s)")->delimiter(',');
  app.add_option("--theta", thetas, "theta value(s) for verify")->delimiter(',');
  app.add_option("--pair", pair, "theta_adv theta_diff")->expected(2)->allow_extra_args(false);
  app.add_option("--order", orders, "IMEX order(s) 1, 2, 3")->delimiter(',');
  app.add_option("--tableau", tableaux, "IMEX tableau name(s) imex1, imex2, imex3")->delimiter(',');
  app.add_option("--a", a, "advection speed");
  app.add_option("--c", c, "diffusion coefficient");
  app.add_option("--dt", dt, "fixed time step");
  app.add_option("--mu", mu, "time step rule dt = mu dx");
  app.add_option("--problem", problem, "decay or growth");
  app.add_option("--tau-cap", tau_cap, "tau declared unbounded");
  app.add_option("--resolution", resolution, "relative bisection resolution");
  app.add_option("--times", times, "snapshot times")->delimiter(',');
  app.add_flag("--quiet", quiet, "no progress line");

  const std::vector<std::pair<gsbp::Subcommand, const char*>> commands{
      {gsbp::Subcommand::verify, "certify the upwind SBP axioms"},
      {gsbp::Subcommand::scan, "maximum stable time step scans"},
      {gsbp::Subcommand::converge, "convergence study with EOC"},
      {gsbp::Subcommand::solve, "single run with snapshots"},
      {gsbp::Subcommand::burgers, "viscous Burgers demonstration"},
  };
  for (const auto& [command, help] : commands) app.add_subcommand(gsbp::to_string(command), help);

  CLI11_PARSE(app, argc, argv);

  const auto chosen = app.get_subcommands().front()->get_name();
  std::vector<std::pair<std::string, std::string>> overrides;
  auto put = [&](const char* key, const std::string& value) {
    if (!value.empty()) overrides.emplace_back(key, value);
  };
  put("N", join(degrees, ","));
  put("K", join(cells, ","));
  put("theta", join(thetas, ","));
  if (!pair.empty()) put("pairs", pair[0] + ":" + pair[1]);
  put("order", join(orders, ","));
  put("tableau", join(tableaux, ","));
  put("a", a);
  put("c", c);
  put("horizon", horizon);
  put("dt", dt);
  put("mu", mu);
  put("problem", problem);
  put("tau_cap", tau_cap);
  put("resolution", resolution);
  put("times", join(times, ","));
  put("out", out);
  put("workers", workers);
  put("seed", seed);

  gsbp::RunConfig config;
  try {
    std::optional<std::string> path;
    if (!config_path.empty()) path = config_path;
    config = gsbp::parse_config(gsbp::subcommand_from_string(chosen), path, overrides);
  } catch (const gsbp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return gsbp::exit_config;
  }
  return gsbp::dispatch(config, std::cout, quiet ? nullptr : &std::cerr);
}
