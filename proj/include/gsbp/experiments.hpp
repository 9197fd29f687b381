#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsbp/imex.hpp"
#include "gsbp/problems.hpp"

namespace gsbp {

// ---------------------------------------------------------------------------
// Maximum stable time step scans

struct StabilityConfig {
  AdvDiffConfig problem;
  int order = 1;
  double horizon = 100.0;

  /// a^2 / c; tau = scale * dt.
  double tau_scale() const { return problem.a * problem.a / problem.c; }
};

struct ProbeOutcome {
  double dt = 0.0;
  bool stable = false;
  bool solver_failure = false;
  int steps = 0;
};

/// Relative per-step slack on the discrete energy before a step counts as
/// growth.
inline constexpr double kEnergySlack = 1e-12;

/// Integrates the decay problem from sin(x) with constant steps dt until the
/// horizon is reached or passed (ceil(T / dt) full steps, at least one) and
/// reports whether ||u||_M^2 was non-increasing at every step.
class StabilityProbe {
 public:
  explicit StabilityProbe(const StabilityConfig& config);

  ProbeOutcome run(double dt) const;
  const StabilityConfig& config() const { return config_; }

 private:
  StabilityConfig config_;
  std::unique_ptr<AdvDiffDiscretization> disc_;
  ImexTableau tableau_;
  Vector initial_;
};

bool is_stable(const StabilityConfig& config, double dt);

struct ScanBracket {
  /// Below this tau the scan gives up and reports BELOW_BRACKET.
  double tau_min = 1e-3;
  /// Starting probe; halved while unstable, doubled while stable.
  double tau_start = 1.0;
  /// A stable probe at this tau is declared UNBOUNDED.
  double tau_cap = 1e4;
};

enum class ScanStatus { bounded, unbounded, below_bracket };

struct StabilityScanResult {
  StabilityConfig config;
  ScanStatus status = ScanStatus::bounded;
  double dt_max = 0.0;
  double tau = 0.0;
  std::vector<ProbeOutcome> probes;
  /// Some stable probe exceeds an unstable one by more than the final
  /// bisection width.
  bool non_monotone = false;

  /// "+" for unbounded, "below" when the bracket failed, otherwise tau.
  std::string tau_text() const;
};

StabilityScanResult max_stable_dt(const StabilityConfig& config, const ScanBracket& bracket = {},
                                  double resolution = 1e-3);

/// Runs every scan on a bounded pool of `workers` threads; results come back
/// in input order.
std::vector<StabilityScanResult> run_scans(const std::vector<StabilityConfig>& configs,
                                           const ScanBracket& bracket, double resolution,
                                           int workers,
                                           const std::function<void(std::size_t)>& progress = {});

/// Columns order,N,K,a,c,theta_adv,theta_diff,tau_or_plus.
std::string stability_csv(const std::vector<StabilityScanResult>& results);

/// tau below which the energy theorems guarantee stability for compatible
/// pairs: 2 for imex1, 1/11 for imex2; none for imex3.
std::optional<double> theorem_tau_floor(int order);

/// Unstable probes at or below the theorem floor (always 0 for incompatible
/// pairs and for imex3).
int floor_violations(const StabilityScanResult& result);

// ---------------------------------------------------------------------------
// Convergence studies

struct ConvergenceConfig {
  AdvDiffConfig problem;
  SolutionKind solution = SolutionKind::decay;
  int order = 2;
  /// dt = mu * dx.
  double mu = 25.0;
  double horizon = 10.0;
};

struct ConvergenceRow {
  int num_cells = 0;
  double dt = 0.0;
  bool stable = true;
  double l2_error = 0.0;
  std::optional<double> eoc;
};

/// Integrates the manufactured problem for one resolution. Rows are marked
/// unstable on non-finite values, on any energy growth for the source-free
/// problem, or when the error exceeds the exact solution's norm.
ConvergenceRow run_convergence_case(const ConvergenceConfig& config, int num_cells);

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config,
                                            const std::vector<int>& cells, int workers = 1);

/// Columns N,K,dt_rule,theta_adv,theta_diff,l2_error,eoc; "-" marks unstable
/// rows and missing EOC values.
std::string convergence_csv(const ConvergenceConfig& config,
                            const std::vector<ConvergenceRow>& rows);

/// The pieces of convergence_csv, for files holding several blocks.
std::string convergence_comment(const ConvergenceConfig& config);
inline constexpr const char* kConvergenceHeader = "N,K,dt_rule,theta_adv,theta_diff,l2_error,eoc";
std::string convergence_rows(const ConvergenceConfig& config,
                             const std::vector<ConvergenceRow>& rows);

// ---------------------------------------------------------------------------
// Viscous Burgers demonstration

struct BurgersConfig {
  double theta_adv = 0.0;
  double theta_diff = 0.0;
  int degree = 2;
  int num_cells = 100;
  double c = 0.1;
  double dt = 0.1;
  double horizon = 2.0;
  int order = 2;
  std::vector<double> snapshot_times{0.0, 1.0, 2.0};
  /// Blow-up when the energy exceeds this multiple of the initial energy.
  double blowup_factor = 1e3;
};

struct Snapshot {
  double time = 0.0;
  Vector x;
  Vector u;
};

struct BurgersResult {
  BurgersConfig config;
  bool completed = false;
  std::optional<double> blowup_time;
  double final_time = 0.0;
  std::vector<Snapshot> snapshots;
  EnergyTrace trace;
};

/// u0 = sin(x) on (-pi, pi), periodic.
BurgersResult run_burgers_demo(const BurgersConfig& config);

std::string snapshot_csv(const Snapshot& snapshot);

}  // namespace gsbp
