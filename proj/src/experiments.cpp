#include "gsbp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace gsbp {

namespace {

// Energies below this fraction of the initial energy are roundoff.
constexpr double kEnergyFloor = 1e-26;

bool energy_grew(double previous, double current, double initial) {
  return current > previous * (1.0 + kEnergySlack) + kEnergyFloor * initial;
}

std::string format_g(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string format_e(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

template <typename Job>
void run_pool(std::size_t count, int workers, Job job) {
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

StabilityProbe::StabilityProbe(const StabilityConfig& config)
    : config_(config),
      disc_(semidiscretize(config.problem)),
      tableau_(tableau_by_order(config.order)) {
  if (!(config_.horizon > 0.0)) throw std::invalid_argument("stability probe: horizon must be positive");
  const ManufacturedSolution initial(SolutionKind::decay, config.problem.a, config.problem.c);
  initial_ = sample(initial, disc_->advection.nodes(), 0.0);
}

ProbeOutcome StabilityProbe::run(double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("stability probe: dt must be positive");
  ProbeOutcome outcome;
  outcome.dt = dt;
  const int steps = std::max(1, static_cast<int>(std::ceil(config_.horizon / dt - 1e-9)));
  const ImexSplitProblem& problem = disc_->problem;
  try {
    ImexStepper stepper(tableau_, problem);
    Vector u = initial_;
    const double e0 = problem.energy(u);
    double e_prev = e0;
    for (int n = 0; n < steps; ++n) {
      u = stepper.step(u, n * dt, dt);
      const double e = problem.energy(u);
      outcome.steps = n + 1;
      if (!std::isfinite(e) || energy_grew(e_prev, e, e0)) return outcome;
      e_prev = e;
    }
    outcome.stable = true;
  } catch (const SolverError&) {
    outcome.solver_failure = true;
  }
  return outcome;
}

bool is_stable(const StabilityConfig& config, double dt) {
  return StabilityProbe(config).run(dt).stable;
}

std::string StabilityScanResult::tau_text() const {
  switch (status) {
    case ScanStatus::unbounded: return "+";
    case ScanStatus::below_bracket: return "below";
    case ScanStatus::bounded: return format_g(tau, 4);
  }
  return "";
}

StabilityScanResult max_stable_dt(const StabilityConfig& config, const ScanBracket& bracket,
                                  double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("max_stable_dt: resolution must be positive");
  if (!(bracket.tau_min > 0.0 && bracket.tau_min <= bracket.tau_start &&
        bracket.tau_start <= bracket.tau_cap)) {
    throw std::invalid_argument("max_stable_dt: require 0 < tau_min <= tau_start <= tau_cap");
  }
  const StabilityProbe probe(config);
  StabilityScanResult result;
  result.config = config;
  const double scale = config.tau_scale();

  auto run = [&](double tau) {
    const ProbeOutcome o = probe.run(tau / scale);
    result.probes.push_back(o);
    return o.stable;
  };

  double lo = 0.0;  // largest stable tau
  double hi = 0.0;  // smallest unstable tau
  double tau = bracket.tau_start;
  if (run(tau)) {
    lo = tau;
    while (true) {
      if (lo >= bracket.tau_cap) {
        result.status = ScanStatus::unbounded;
        result.tau = lo;
        result.dt_max = lo / scale;
        return result;
      }
      tau = std::min(2.0 * lo, bracket.tau_cap);
      if (run(tau)) {
        lo = tau;
      } else {
        hi = tau;
        break;
      }
    }
  } else {
    hi = tau;
    while (true) {
      tau = std::max(0.5 * hi, bracket.tau_min);
      if (run(tau)) {
        lo = tau;
        break;
      }
      hi = tau;
      if (tau <= bracket.tau_min) {
        result.status = ScanStatus::below_bracket;
        return result;
      }
    }
  }

  while ((hi - lo) > resolution * lo) {
    const double mid = 0.5 * (lo + hi);
    if (run(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.status = ScanStatus::bounded;
  result.tau = lo;
  result.dt_max = lo / scale;

  const double width = (hi - lo) / scale;
  double max_stable = 0.0;
  double min_unstable = INFINITY;
  for (const auto& p : result.probes) {
    if (p.stable) {
      max_stable = std::max(max_stable, p.dt);
    } else {
      min_unstable = std::min(min_unstable, p.dt);
    }
  }
  result.non_monotone = max_stable > min_unstable + width;
  return result;
}

std::vector<StabilityScanResult> run_scans(const std::vector<StabilityConfig>& configs,
                                           const ScanBracket& bracket, double resolution,
                                           int workers,
                                           const std::function<void(std::size_t)>& progress) {
  std::vector<StabilityScanResult> results(configs.size());
  std::mutex progress_mutex;
  std::size_t done = 0;
  run_pool(configs.size(), workers, [&](std::size_t i) {
    results[i] = max_stable_dt(configs[i], bracket, resolution);
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done);
    }
  });
  return results;
}

std::string stability_csv(const std::vector<StabilityScanResult>& results) {
  std::ostringstream os;
  os << "order,N,K,a,c,theta_adv,theta_diff,tau_or_plus\n";
  for (const auto& r : results) {
    const AdvDiffConfig& p = r.config.problem;
    os << r.config.order << ',' << p.degree << ',' << p.num_cells << ',' << format_g(p.a) << ','
       << format_g(p.c) << ',' << format_g(p.theta_adv) << ',' << format_g(p.theta_diff) << ','
       << r.tau_text() << '\n';
  }
  return os.str();
}

std::optional<double> theorem_tau_floor(int order) {
  if (order == 1) return 2.0;
  if (order == 2) return 1.0 / 11.0;
  return std::nullopt;
}

int floor_violations(const StabilityScanResult& result) {
  const auto floor = theorem_tau_floor(result.config.order);
  if (!floor || !result.config.problem.compatible()) return 0;
  const double dt_floor = *floor / result.config.tau_scale();
  int count = 0;
  for (const auto& p : result.probes) {
    if (!p.stable && p.dt <= dt_floor * (1.0 + 1e-12)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------

ConvergenceRow run_convergence_case(const ConvergenceConfig& config, int num_cells) {
  AdvDiffConfig problem = config.problem;
  problem.num_cells = num_cells;
  const ManufacturedSolution solution(config.solution, problem.a, problem.c);
  const auto disc = semidiscretize(problem, &solution);

  ConvergenceRow row;
  row.num_cells = num_cells;
  row.dt = config.mu * (problem.x_b - problem.x_a) / num_cells;

  const Vector& nodes = disc->advection.nodes();
  const Vector u0 = sample(solution, nodes, 0.0);
  if (config.horizon <= 0.0) {
    row.l2_error = l2_error(u0, solution, 0.0, nodes, disc->problem.norm);
    return row;
  }

  const double e0 = disc->problem.energy(u0);
  double e_prev = e0;
  bool unstable = false;
  const bool check_energy = !solution.has_source();
  auto observer = [&](int, double, double e, const Vector&) {
    if (!std::isfinite(e) || (check_energy && energy_grew(e_prev, e, e0))) {
      unstable = true;
      return false;
    }
    e_prev = e;
    return true;
  };

  try {
    const IntegrationResult result = integrate(tableau_by_order(config.order), disc->problem, u0,
                                               row.dt, config.horizon, observer);
    if (!unstable) {
      row.l2_error = l2_error(result.state, solution, config.horizon, nodes, disc->problem.norm);
      const Vector exact = sample(solution, nodes, config.horizon);
      const double exact_norm = std::sqrt(disc->problem.energy(exact));
      if (!std::isfinite(row.l2_error) || row.l2_error > exact_norm) unstable = true;
    }
  } catch (const SolverError&) {
    unstable = true;
  }
  row.stable = !unstable;
  return row;
}

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config,
                                            const std::vector<int>& cells, int workers) {
  std::vector<ConvergenceRow> rows(cells.size());
  run_pool(cells.size(), workers,
           [&](std::size_t i) { rows[i] = run_convergence_case(config, cells[i]); });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& prev = rows[i - 1];
    auto& cur = rows[i];
    if (prev.stable && cur.stable && prev.l2_error > 0.0 && cur.l2_error > 0.0) {
      cur.eoc = std::log(prev.l2_error / cur.l2_error) /
                std::log(static_cast<double>(cur.num_cells) / prev.num_cells);
    }
  }
  return rows;
}

std::string convergence_comment(const ConvergenceConfig& config) {
  std::ostringstream os;
  os << "# error norm: discrete M-norm of the nodal error at T = " << format_g(config.horizon)
     << "; problem = " << to_string(config.solution) << "; order = " << config.order
     << "; a = " << format_g(config.problem.a) << "; c = " << format_g(config.problem.c) << '\n';
  return os.str();
}

std::string convergence_rows(const ConvergenceConfig& config,
                             const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    os << config.problem.degree << ',' << r.num_cells << ',' << format_g(config.mu) << "*dx,"
       << format_g(config.problem.theta_adv) << ',' << format_g(config.problem.theta_diff) << ','
       << (r.stable ? format_e(r.l2_error) : "-") << ','
       << (r.eoc ? format_g(*r.eoc, 4) : "-") << '\n';
  }
  return os.str();
}

std::string convergence_csv(const ConvergenceConfig& config,
                            const std::vector<ConvergenceRow>& rows) {
  return convergence_comment(config) + kConvergenceHeader + "\n" + convergence_rows(config, rows);
}

// ---------------------------------------------------------------------------

BurgersResult run_burgers_demo(const BurgersConfig& config) {
  const ReferenceElement elem = build_lgl(config.degree);
  const Mesh1D mesh = uniform_mesh(-std::numbers::pi, std::numbers::pi, config.num_cells);
  const auto disc = burgers_rhs(elem, mesh, config.theta_adv, config.theta_diff, config.c);
  const Vector& x = disc->advection.nodes();

  BurgersResult result;
  result.config = config;
  Vector u0 = x.array().sin();
  const double e0 = disc->problem.energy(u0);

  std::vector<double> pending = config.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;
  auto take_snapshots = [&](double t, const Vector& u) {
    while (next_snapshot < pending.size() && pending[next_snapshot] <= t + 1e-9) {
      result.snapshots.push_back({t, x, u});
      ++next_snapshot;
    }
  };
  take_snapshots(0.0, u0);

  auto observer = [&](int, double t, double e, const Vector& u) {
    if (!std::isfinite(e) || !u.allFinite() || e > config.blowup_factor * e0) {
      result.blowup_time = t;
      return false;
    }
    take_snapshots(t, u);
    return true;
  };
  try {
    const IntegrationResult run = integrate(tableau_by_order(config.order), disc->problem, u0,
                                            config.dt, config.horizon, observer);
    result.trace = run.trace;
    result.final_time = run.time;
  } catch (const SolverError&) {
    result.blowup_time = result.trace.time.empty() ? 0.0 : result.trace.time.back();
  }
  result.completed = !result.blowup_time.has_value();
  return result;
}

std::string snapshot_csv(const Snapshot& snapshot) {
  std::ostringstream os;
  os << "x,u\n";
  for (Eigen::Index j = 0; j < snapshot.x.size(); ++j) {
    os << format_e(snapshot.x[j]) << ',' << format_e(snapshot.u[j]) << '\n';
  }
  return os.str();
}

}  // namespace gsbp
