#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsbp/experiments.hpp"

namespace gsbp {

enum class Subcommand { verify, scan, converge, solve, burgers };

std::string to_string(Subcommand command);
Subcommand subcommand_from_string(const std::string& name);

/// Parse errors carry the 1-based line (0 for flags); domain errors name the
/// offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string key = {});
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

using ThetaPair = std::pair<double, double>;

/// Everything a run needs. Lists are swept in the order given.
struct RunConfig {
  Subcommand command = Subcommand::scan;
  std::vector<int> degrees;
  std::vector<int> cells;
  std::vector<double> thetas;  // verify only
  std::vector<ThetaPair> pairs;
  std::vector<int> orders;
  double a = 0.1;
  double c = 0.1;
  double horizon = 100.0;
  std::optional<double> dt;  // fixed step; otherwise dt = mu * dx
  double mu = 25.0;
  SolutionKind problem = SolutionKind::decay;
  double tau_cap = 1e4;
  double resolution = 1e-3;
  std::vector<double> times;
  std::string out = ".";
  int workers = 1;
  unsigned long seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Defaults of each subcommand reproduce one published experiment:
///   verify    N 1..3, K 4,20,80, theta 0,1/4,1/2
///   scan      a = c = 0.1, N 1..3, K 20..320, the four theta pairs, imex1 and imex2, T = 100
///   converge  a = c = 0.1, N = 1, K 20..320, imex2, dt = 25 dx, T = 10, all four pairs
///   solve     one decay run, N = 1, K = 20, (1/2, 1/2), imex2, dt = 25 dx, T = 10
///   burgers   c = 0.1, N = 2, K 50,100, pairs (1/2, 0) and (0, 0), imex2, dt = 0.1, T = 2
RunConfig default_config(Subcommand command);

/// Keys accepted in config files and by apply_setting.
const std::vector<std::string>& config_keys();

/// Sets one key from its text form. Lists are comma separated; pairs are
/// written theta_adv:theta_diff.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   int line = 0);

/// Flat "key = value" lines; '#' starts a comment. A "command" key selects
/// the subcommand's defaults and must come before any other key.
RunConfig parse_config_text(const std::string& text,
                            std::optional<Subcommand> command = std::nullopt);

/// Defaults, then the file (if any), then the overrides in order.
/// Validates the result.
RunConfig parse_config(Subcommand command, const std::optional<std::string>& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Throws ConfigError naming the offending key.
void validate(const RunConfig& config);

/// Inverse of parse_config_text, exact for every double.
std::string serialize(const RunConfig& config);

/// Exit codes of dispatch.
enum ExitCode : int {
  exit_ok = 0,
  exit_io = 1,
  exit_config = 2,
  exit_assertion = 3,
  exit_solver = 4,
};

/// Runs the configured experiment, writes its files under config.out and
/// returns an ExitCode. `log` receives a short human-readable summary;
/// `progress` (may be null) receives a single updating progress line.
int dispatch(const RunConfig& config, std::ostream& log, std::ostream* progress = nullptr);

}  // namespace gsbp
