#include "gsbp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace gsbp {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text, const std::string& key, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("'" + text + "' is not a number", line, key);
  }
  return v;
}

long parse_long(const std::string& text, const std::string& key, int line) {
  long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("'" + text + "' is not an integer", line, key);
  }
  return v;
}

std::vector<int> parse_ints(const std::string& text, const std::string& key, int line) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) out.push_back(static_cast<int>(parse_long(item, key, line)));
  return out;
}

// "imex2" or "2".
std::vector<int> parse_tableaux(const std::string& text, const std::string& key, int line) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const std::string digits = item.rfind("imex", 0) == 0 ? item.substr(4) : item;
    out.push_back(static_cast<int>(parse_long(digits, key, line)));
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& key, int line) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, key, line));
  return out;
}

std::vector<ThetaPair> parse_pairs(const std::string& text, const std::string& key, int line) {
  std::vector<ThetaPair> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) {
      throw ConfigError("pair '" + item + "' must be theta_adv:theta_diff", line, key);
    }
    out.emplace_back(parse_double(parts[0], key, line), parse_double(parts[1], key, line));
  }
  return out;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F fmt) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ",";
    s += fmt(items[i]);
  }
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw std::ios_base::failure("cannot write " + path.string());
}

AdvDiffConfig problem_for(const RunConfig& cfg, int degree, int cells, const ThetaPair& pair) {
  AdvDiffConfig p;
  p.a = cfg.a;
  p.c = cfg.c;
  p.degree = degree;
  p.num_cells = cells;
  p.theta_adv = pair.first;
  p.theta_diff = pair.second;
  return p;
}

class Progress {
 public:
  Progress(std::ostream* os, std::string label, std::size_t total)
      : os_(os), label_(std::move(label)), total_(total) {}
  void operator()(std::size_t done) const {
    if (os_ == nullptr) return;
    *os_ << '\r' << label_ << ' ' << done << '/' << total_ << std::flush;
    if (done == total_) *os_ << '\n';
  }

 private:
  std::ostream* os_;
  std::string label_;
  std::size_t total_;
};

// ---------------------------------------------------------------------------

int run_verify(const RunConfig& cfg, std::ostream& log) {
  std::ostringstream csv;
  std::ostringstream text;
  csv << CertificationReport::csv_header() << '\n';
  int failures = 0;
  for (int n : cfg.degrees) {
    const ReferenceElement elem = build_lgl(n);
    for (int k : cfg.cells) {
      const Mesh1D mesh = uniform_mesh(-std::numbers::pi, std::numbers::pi, k);
      for (double theta : cfg.thetas) {
        for (Topology topo : {Topology::bounded, Topology::periodic}) {
          const CertificationReport r = verify_axioms(GlobalOperatorSet(elem, mesh, theta, topo));
          csv << r.csv_row() << '\n';
          text << r.to_text() << '\n';
          if (!r.all_passed()) {
            ++failures;
            log << "FAIL N=" << n << " K=" << k << " theta=" << short_num(theta) << ' '
                << to_string(topo) << '\n';
          }
        }
      }
    }
  }
  write_file(fs::path(cfg.out) / "certification.csv", csv.str());
  write_file(fs::path(cfg.out) / "certification.txt", text.str());
  if (failures > 0) {
    log << "assertion failure: " << failures << " operator set(s) violate the upwind SBP axioms\n";
    return exit_assertion;
  }
  log << "all axioms pass\n";
  return exit_ok;
}

int run_scan(const RunConfig& cfg, std::ostream& log, std::ostream* progress) {
  std::vector<StabilityConfig> configs;
  for (int order : cfg.orders) {
    for (int n : cfg.degrees) {
      for (int k : cfg.cells) {
        for (const auto& pair : cfg.pairs) {
          StabilityConfig s;
          s.problem = problem_for(cfg, n, k, pair);
          s.order = order;
          s.horizon = cfg.horizon;
          configs.push_back(s);
        }
      }
    }
  }
  ScanBracket bracket;
  bracket.tau_cap = cfg.tau_cap;
  bracket.tau_start = std::min(bracket.tau_start, cfg.tau_cap);
  bracket.tau_min = std::min(bracket.tau_min, bracket.tau_start);
  const Progress report(progress, "scan", configs.size());
  const auto results = run_scans(configs, bracket, cfg.resolution, cfg.workers, report);
  write_file(fs::path(cfg.out) / "stability.csv", stability_csv(results));

  int violations = 0;
  int solver_failures = 0;
  for (const auto& r : results) {
    const AdvDiffConfig& p = r.config.problem;
    const int v = floor_violations(r);
    violations += v;
    if (v > 0) {
      log << "theorem floor violated: order " << r.config.order << " N=" << p.degree
          << " K=" << p.num_cells << " pair (" << short_num(p.theta_adv) << ','
          << short_num(p.theta_diff) << ")\n";
    }
    if (r.non_monotone) {
      log << "non-monotone stability: order " << r.config.order << " N=" << p.degree
          << " K=" << p.num_cells << " pair (" << short_num(p.theta_adv) << ','
          << short_num(p.theta_diff) << ")\n";
    }
    for (const auto& probe : r.probes) solver_failures += probe.solver_failure ? 1 : 0;
  }
  log << results.size() << " scans written to stability.csv\n";
  if (solver_failures > 0) log << solver_failures << " probe(s) counted unstable after solver failure\n";
  if (violations > 0) {
    log << "assertion failure: instability below the theorem bound\n";
    return exit_assertion;
  }
  return exit_ok;
}

int run_converge(const RunConfig& cfg, std::ostream& log, std::ostream* progress) {
  std::ostringstream csv;
  bool header = false;
  std::size_t blocks = 0;
  const std::size_t total = cfg.orders.size() * cfg.degrees.size() * cfg.pairs.size();
  const Progress report(progress, "converge", total);
  for (int order : cfg.orders) {
    for (int n : cfg.degrees) {
      for (const auto& pair : cfg.pairs) {
        ConvergenceConfig cc;
        cc.problem = problem_for(cfg, n, cfg.cells.front(), pair);
        cc.solution = cfg.problem;
        cc.order = order;
        cc.mu = cfg.mu;
        cc.horizon = cfg.horizon;
        const auto rows = run_convergence(cc, cfg.cells, cfg.workers);
        csv << convergence_comment(cc);
        if (!header) {
          csv << kConvergenceHeader << '\n';
          header = true;
        }
        csv << convergence_rows(cc, rows);
        report(++blocks);
      }
    }
  }
  write_file(fs::path(cfg.out) / "convergence.csv", csv.str());
  log << blocks << " refinement block(s) written to convergence.csv\n";
  return exit_ok;
}

int run_solve(const RunConfig& cfg, std::ostream& log) {
  const AdvDiffConfig p = problem_for(cfg, cfg.degrees.front(), cfg.cells.front(), cfg.pairs.front());
  const ManufacturedSolution solution(cfg.problem, p.a, p.c);
  const auto disc = semidiscretize(p, &solution);
  const Vector& x = disc->advection.nodes();
  const double dt = cfg.dt ? *cfg.dt : cfg.mu * (p.x_b - p.x_a) / p.num_cells;

  std::vector<double> pending = cfg.times;
  std::sort(pending.begin(), pending.end());
  std::size_t next = 0;
  std::vector<std::pair<double, std::string>> snapshots;
  auto take = [&](double t, const Vector& u) {
    while (next < pending.size() && pending[next] <= t + 1e-9) {
      std::ostringstream os;
      os << "# t = " << exact(t) << '\n' << "x,u,exact\n";
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.6e,%.6e,%.6e\n", x[j], u[j], solution.value(x[j], t));
        os << buf;
      }
      snapshots.emplace_back(pending[next], os.str());
      ++next;
    }
  };
  const Vector u0 = sample(solution, x, 0.0);
  take(0.0, u0);
  bool finite = true;
  auto observer = [&](int, double t, double e, const Vector& u) {
    if (!std::isfinite(e)) {
      finite = false;
      return false;
    }
    take(t, u);
    return true;
  };
  const IntegrationResult result =
      integrate(tableau_by_order(cfg.orders.front()), disc->problem, u0, dt, cfg.horizon, observer);

  for (const auto& [t, content] : snapshots) {
    write_file(fs::path(cfg.out) / ("solve_t" + short_num(t) + ".csv"), content);
  }
  write_file(fs::path(cfg.out) / "solve_energy.csv", result.trace.to_csv());
  std::ostringstream summary;
  summary << "problem: " << to_string(cfg.problem) << '\n'
          << "N: " << p.degree << '\n'
          << "K: " << p.num_cells << '\n'
          << "theta_adv: " << short_num(p.theta_adv) << '\n'
          << "theta_diff: " << short_num(p.theta_diff) << '\n'
          << "order: " << cfg.orders.front() << '\n'
          << "dt: " << exact(dt) << '\n'
          << "steps: " << result.steps << '\n'
          << "final_time: " << exact(result.time) << '\n';
  if (finite) {
    const double err = l2_error(result.state, solution, result.time, x, disc->problem.norm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", err);
    summary << "l2_error: " << buf << '\n';
  } else {
    summary << "l2_error: -\n";
  }
  write_file(fs::path(cfg.out) / "solve_summary.txt", summary.str());
  log << summary.str();
  if (!finite) {
    log << "solver failure: non-finite state\n";
    return exit_solver;
  }
  return exit_ok;
}

int run_burgers(const RunConfig& cfg, std::ostream& log, std::ostream* progress) {
  std::ostringstream summary;
  summary << "theta_adv,theta_diff,K,completed,blowup_time,final_time,max_energy\n";
  const Progress report(progress, "burgers", cfg.pairs.size() * cfg.cells.size());
  std::size_t done = 0;
  for (const auto& pair : cfg.pairs) {
    for (int k : cfg.cells) {
      BurgersConfig b;
      b.theta_adv = pair.first;
      b.theta_diff = pair.second;
      b.degree = cfg.degrees.front();
      b.num_cells = k;
      b.c = cfg.c;
      b.dt = cfg.dt.value_or(0.1);
      b.horizon = cfg.horizon;
      b.order = cfg.orders.front();
      b.snapshot_times = cfg.times;
      const BurgersResult r = run_burgers_demo(b);
      const std::string stem =
          "burgers_" + short_num(pair.first) + "_" + short_num(pair.second) + "_K" + std::to_string(k);
      for (const auto& s : r.snapshots) {
        write_file(fs::path(cfg.out) / (stem + "_t" + short_num(s.time) + ".csv"), snapshot_csv(s));
      }
      write_file(fs::path(cfg.out) / (stem + "_energy.csv"), r.trace.to_csv());
      double emax = 0.0;
      for (double e : r.trace.energy) emax = std::max(emax, e);
      summary << short_num(pair.first) << ',' << short_num(pair.second) << ',' << k << ','
              << (r.completed ? "yes" : "no") << ','
              << (r.blowup_time ? short_num(*r.blowup_time) : "-") << ','
              << short_num(r.final_time) << ',' << short_num(emax) << '\n';
      log << stem << ": " << (r.completed ? "completed" : "blow-up at t = " + short_num(*r.blowup_time))
          << '\n';
      report(++done);
    }
  }
  write_file(fs::path(cfg.out) / "burgers_summary.csv", summary.str());
  return exit_ok;
}

}  // namespace

// ---------------------------------------------------------------------------

ConfigError::ConfigError(const std::string& message, int line, std::string key)
    : std::runtime_error([&] {
        std::string m;
        if (line > 0) m += "line " + std::to_string(line) + ": ";
        if (!key.empty()) m += key + ": ";
        return m + message;
      }()),
      line_(line),
      key_(std::move(key)) {}

std::string to_string(Subcommand command) {
  switch (command) {
    case Subcommand::verify: return "verify";
    case Subcommand::scan: return "scan";
    case Subcommand::converge: return "converge";
    case Subcommand::solve: return "solve";
    case Subcommand::burgers: return "burgers";
  }
  return "scan";
}

Subcommand subcommand_from_string(const std::string& name) {
  for (auto c : {Subcommand::verify, Subcommand::scan, Subcommand::converge, Subcommand::solve,
                 Subcommand::burgers}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown subcommand '" + name + "'", 0, "command");
}

RunConfig default_config(Subcommand command) {
  RunConfig cfg;
  cfg.command = command;
  const std::vector<ThetaPair> table_pairs{{0.5, 0.5}, {0.5, 0.0}, {0.25, 0.25}, {0.0, 0.0}};
  const std::vector<int> refinement{20, 40, 80, 160, 320};
  switch (command) {
    case Subcommand::verify:
      cfg.degrees = {1, 2, 3};
      cfg.cells = {4, 20, 80};
      cfg.thetas = {0.0, 0.25, 0.5};
      cfg.pairs = {{0.5, 0.5}};
      cfg.orders = {1};
      cfg.horizon = 1.0;
      break;
    case Subcommand::scan:
      cfg.degrees = {1, 2, 3};
      cfg.cells = refinement;
      cfg.pairs = table_pairs;
      cfg.orders = {1, 2};
      cfg.horizon = 100.0;
      break;
    case Subcommand::converge:
      cfg.degrees = {1};
      cfg.cells = refinement;
      cfg.pairs = table_pairs;
      cfg.orders = {2};
      cfg.horizon = 10.0;
      cfg.mu = 25.0;
      break;
    case Subcommand::solve:
      cfg.degrees = {1};
      cfg.cells = {20};
      cfg.pairs = {{0.5, 0.5}};
      cfg.orders = {2};
      cfg.horizon = 10.0;
      cfg.mu = 25.0;
      cfg.times = {0.0, 10.0};
      break;
    case Subcommand::burgers:
      cfg.degrees = {2};
      cfg.cells = {50, 100};
      cfg.pairs = {{0.5, 0.0}, {0.0, 0.0}};
      cfg.orders = {2};
      cfg.horizon = 2.0;
      cfg.dt = 0.1;
      cfg.times = {0.0, 1.0, 2.0};
      break;
  }
  return cfg;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "command", "N",          "K",     "theta", "pairs", "order", "tableau", "a",       "c",    "horizon",
      "dt",      "mu",         "problem", "tau_cap", "resolution", "times", "out", "workers",
      "seed"};
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
  if (key == "command") {
    cfg.command = subcommand_from_string(value);
  } else if (key == "N") {
    cfg.degrees = parse_ints(value, key, line);
  } else if (key == "K") {
    cfg.cells = parse_ints(value, key, line);
  } else if (key == "theta") {
    cfg.thetas = parse_doubles(value, key, line);
  } else if (key == "pairs") {
    cfg.pairs = parse_pairs(value, key, line);
  } else if (key == "order") {
    cfg.orders = parse_ints(value, key, line);
  } else if (key == "tableau") {
    cfg.orders = parse_tableaux(value, key, line);
  } else if (key == "a") {
    cfg.a = parse_double(value, key, line);
  } else if (key == "c") {
    cfg.c = parse_double(value, key, line);
  } else if (key == "horizon") {
    cfg.horizon = parse_double(value, key, line);
  } else if (key == "dt") {
    if (value == "none" || value.empty()) {
      cfg.dt.reset();
    } else {
      cfg.dt = parse_double(value, key, line);
    }
  } else if (key == "mu") {
    cfg.mu = parse_double(value, key, line);
  } else if (key == "problem") {
    try {
      cfg.problem = solution_kind_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line, key);
    }
  } else if (key == "tau_cap") {
    cfg.tau_cap = parse_double(value, key, line);
  } else if (key == "resolution") {
    cfg.resolution = parse_double(value, key, line);
  } else if (key == "times") {
    cfg.times = value.empty() ? std::vector<double>{} : parse_doubles(value, key, line);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(parse_long(value, key, line));
  } else if (key == "seed") {
    const long s = parse_long(value, key, line);
    if (s < 0) throw ConfigError("must be non-negative", line, key);
    cfg.seed = static_cast<unsigned long>(s);
  } else {
    throw ConfigError("unknown key '" + key + "'", line, key);
  }
}

RunConfig parse_config_text(const std::string& text, std::optional<Subcommand> command) {
  RunConfig cfg = default_config(command.value_or(Subcommand::scan));
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  bool seen_other = false;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    if (key == "command") {
      if (seen_other) throw ConfigError("must precede every other key", line, key);
      const Subcommand file_command = subcommand_from_string(value);
      if (!command) cfg = default_config(file_command);
      continue;
    }
    seen_other = true;
    apply_setting(cfg, key, value, line);
  }
  return cfg;
}

RunConfig parse_config(Subcommand command, const std::optional<std::string>& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg = default_config(command);
  if (path) {
    std::ifstream is(*path);
    if (!is) throw ConfigError("cannot read config file '" + *path + "'");
    std::ostringstream text;
    text << is.rdbuf();
    cfg = parse_config_text(text.str(), command);
  }
  for (const auto& [key, value] : overrides) apply_setting(cfg, key, value, 0);
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& key, const std::string& what) { throw ConfigError(what, 0, key); };
  auto check_theta = [&](const std::string& key, double t) {
    if (!(t >= -0.5 && t <= 0.5)) fail(key, "theta = " + short_num(t) + " outside [-1/2, 1/2]");
  };
  if (cfg.degrees.empty()) fail("N", "empty list");
  for (int n : cfg.degrees) {
    if (n < kMinDegree || n > kMaxDegree) fail("N", std::to_string(n) + " outside [1, 16]");
  }
  if (cfg.cells.empty()) fail("K", "empty list");
  for (int k : cfg.cells) {
    if (k < 2) fail("K", "at least two cells required");
  }
  for (double t : cfg.thetas) check_theta("theta", t);
  if (cfg.pairs.empty()) fail("pairs", "empty list");
  for (const auto& [ta, td] : cfg.pairs) {
    check_theta("pairs", ta);
    check_theta("pairs", td);
  }
  if (cfg.orders.empty()) fail("order", "empty list");
  for (int o : cfg.orders) {
    if (o < 1 || o > 3) fail("order", std::to_string(o) + " is not one of 1, 2, 3");
  }
  if (!(cfg.a > 0.0)) fail("a", "must be positive");
  if (!(cfg.c > 0.0)) fail("c", "must be positive");
  if (!(cfg.horizon > 0.0)) fail("horizon", "must be positive");
  if (cfg.dt && !(*cfg.dt > 0.0)) fail("dt", "must be positive");
  if (!(cfg.mu > 0.0)) fail("mu", "must be positive");
  if (!(cfg.tau_cap > 0.0)) fail("tau_cap", "must be positive");
  if (!(cfg.resolution > 0.0 && cfg.resolution < 1.0)) fail("resolution", "must lie in (0, 1)");
  for (double t : cfg.times) {
    if (!(t >= 0.0)) fail("times", "must be non-negative");
  }
  if (cfg.workers < 1) fail("workers", "must be at least 1");
  if (cfg.out.empty()) fail("out", "empty path");
  if (cfg.command == Subcommand::verify && cfg.thetas.empty()) fail("theta", "empty list");
  if (cfg.command == Subcommand::solve) {
    if (cfg.degrees.size() != 1) fail("N", "solve takes a single value");
    if (cfg.cells.size() != 1) fail("K", "solve takes a single value");
    if (cfg.pairs.size() != 1) fail("pairs", "solve takes a single pair");
    if (cfg.orders.size() != 1) fail("order", "solve takes a single value");
  }
  if (cfg.command == Subcommand::burgers) {
    if (cfg.degrees.size() != 1) fail("N", "burgers takes a single value");
    if (cfg.orders.size() != 1) fail("order", "burgers takes a single value");
  }
  if (cfg.command == Subcommand::converge) {
    for (std::size_t i = 1; i < cfg.cells.size(); ++i) {
      if (cfg.cells[i] <= cfg.cells[i - 1]) fail("K", "refinement list must be increasing");
    }
  }
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream os;
  os << "command = " << to_string(cfg.command) << '\n'
     << "N = " << join(cfg.degrees, [](int v) { return std::to_string(v); }) << '\n'
     << "K = " << join(cfg.cells, [](int v) { return std::to_string(v); }) << '\n'
     << "theta = " << join(cfg.thetas, exact) << '\n'
     << "pairs = "
     << join(cfg.pairs, [](const ThetaPair& p) { return exact(p.first) + ":" + exact(p.second); })
     << '\n'
     << "order = " << join(cfg.orders, [](int v) { return std::to_string(v); }) << '\n'
     << "a = " << exact(cfg.a) << '\n'
     << "c = " << exact(cfg.c) << '\n'
     << "horizon = " << exact(cfg.horizon) << '\n'
     << "dt = " << (cfg.dt ? exact(*cfg.dt) : "none") << '\n'
     << "mu = " << exact(cfg.mu) << '\n'
     << "problem = " << to_string(cfg.problem) << '\n'
     << "tau_cap = " << exact(cfg.tau_cap) << '\n'
     << "resolution = " << exact(cfg.resolution) << '\n'
     << "times = " << join(cfg.times, exact) << '\n'
     << "out = " << cfg.out << '\n'
     << "workers = " << cfg.workers << '\n'
     << "seed = " << cfg.seed << '\n';
  return os.str();
}

int dispatch(const RunConfig& cfg, std::ostream& log, std::ostream* progress) {
  try {
    validate(cfg);
    fs::create_directories(cfg.out);
    write_file(fs::path(cfg.out) / "run_config.txt", serialize(cfg));
    switch (cfg.command) {
      case Subcommand::verify: return run_verify(cfg, log);
      case Subcommand::scan: return run_scan(cfg, log, progress);
      case Subcommand::converge: return run_converge(cfg, log, progress);
      case Subcommand::solve: return run_solve(cfg, log);
      case Subcommand::burgers: return run_burgers(cfg, log, progress);
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << '\n';
    return exit_solver;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::ios_base::failure& e) {
    log << "i/o error: " << e.what() << '\n';
    return exit_io;
  } catch (const fs::filesystem_error& e) {
    log << "i/o error: " << e.what() << '\n';
    return exit_io;
  }
  return exit_ok;
}

}  // namespace gsbp
