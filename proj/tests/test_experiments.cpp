#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gsbp/experiments.hpp"

using namespace gsbp;

namespace {

StabilityConfig scan_config(int order, double a, double c, double ta, double td, int n, int k) {
  StabilityConfig s;
  s.problem.a = a;
  s.problem.c = c;
  s.problem.theta_adv = ta;
  s.problem.theta_diff = td;
  s.problem.degree = n;
  s.problem.num_cells = k;
  s.order = order;
  return s;
}

double dt_of_tau(const StabilityConfig& s, double tau) { return tau / s.tau_scale(); }

}  // namespace

TEST_CASE("first-order energy bound is stable for compatible pairs") {
  for (double theta : {0.0, 0.25, 0.5}) {
    for (int n = 1; n <= 3; ++n) {
      const auto s = scan_config(1, 0.1, 0.1, theta, theta, n, 20);
      CHECK(is_stable(s, 2.0 * s.problem.c / (s.problem.a * s.problem.a)));
    }
  }
}

TEST_CASE("bracketing probes for the incompatible pair") {
  const auto s = scan_config(1, 0.1, 0.1, 0.5, 0.0, 1, 40);
  CHECK(is_stable(s, dt_of_tau(s, 0.15)));
  CHECK_FALSE(is_stable(s, dt_of_tau(s, 2.0)));
  const auto probe = StabilityProbe(s).run(dt_of_tau(s, 2.0));
  CHECK_FALSE(probe.stable);
  CHECK_FALSE(probe.solver_failure);
  CHECK(probe.steps >= 1);
}

TEST_CASE("vanishing time step is stable") {
  for (double ta : {0.0, 0.5}) {
    for (double td : {0.0, 0.5}) {
      for (int order = 1; order <= 3; ++order) {
        auto s = scan_config(order, 0.1, 0.1, ta, td, 2, 20);
        s.horizon = 1.0;
        CHECK(is_stable(s, dt_of_tau(s, 1e-3)));
      }
    }
  }
}

TEST_CASE("scan examples") {
  const auto lo = max_stable_dt(scan_config(1, 0.2, 0.01, 0.5, 0.5, 1, 40));
  CHECK(lo.status == ScanStatus::bounded);
  CHECK(lo.tau == doctest::Approx(2.0).epsilon(0.1));
  CHECK(lo.dt_max == doctest::Approx(lo.tau / 4.0));
  CHECK_FALSE(lo.non_monotone);

  const auto plus = max_stable_dt(scan_config(1, 0.1, 0.1, 0.0, 0.0, 2, 20));
  CHECK(plus.status == ScanStatus::unbounded);
  CHECK(plus.tau_text() == "+");

  const auto third = max_stable_dt(scan_config(3, 0.1, 0.1, 0.25, 0.25, 2, 80));
  CHECK(third.tau == doctest::Approx(5.9).epsilon(0.1));
}

TEST_CASE("below-bracket outcome") {
  ScanBracket bracket;
  bracket.tau_min = 0.5;
  bracket.tau_start = 1.0;
  const auto r = max_stable_dt(scan_config(1, 0.1, 0.1, 0.5, 0.0, 3, 80), bracket);
  CHECK(r.status == ScanStatus::below_bracket);
  CHECK(r.tau_text() == "below");
  bracket.tau_cap = 0.1;
  CHECK_THROWS_AS(max_stable_dt(scan_config(1, 0.1, 0.1, 0.5, 0.5, 1, 20), bracket),
                  std::invalid_argument);
}

TEST_CASE("parallel scans keep input order") {
  std::vector<StabilityConfig> configs;
  for (int k : {20, 40}) {
    for (double td : {0.0, 0.5}) configs.push_back(scan_config(2, 0.1, 0.1, 0.5, td, 1, k));
  }
  const auto serial = run_scans(configs, {}, 1e-3, 1);
  std::size_t last = 0;
  const auto parallel = run_scans(configs, {}, 1e-3, 3, [&](std::size_t done) { last = done; });
  CHECK(last == configs.size());
  CHECK(stability_csv(serial) == stability_csv(parallel));
  CHECK(stability_csv(serial).rfind("order,N,K,a,c,theta_adv,theta_diff,tau_or_plus\n", 0) == 0);
}

TEST_CASE("theorem floors") {
  CHECK(*theorem_tau_floor(1) == 2.0);
  CHECK(*theorem_tau_floor(2) == doctest::Approx(1.0 / 11.0));
  CHECK_FALSE(theorem_tau_floor(3).has_value());
  const auto r = max_stable_dt(scan_config(2, 0.1, 0.1, 0.5, 0.5, 1, 20));
  CHECK(floor_violations(r) == 0);
  StabilityScanResult fake = r;
  fake.probes.push_back({dt_of_tau(r.config, 0.05), false, false, 1});
  CHECK(floor_violations(fake) == 1);
  fake.config.problem.theta_diff = 0.0;
  CHECK(floor_violations(fake) == 0);
}

TEST_CASE("convergence rows") {
  ConvergenceConfig cfg;
  const auto rows = run_convergence(cfg, {20, 40}, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].l2_error == doctest::Approx(1.01e-1).epsilon(0.05));
  CHECK(rows[1].l2_error == doctest::Approx(2.31e-2).epsilon(0.05));
  CHECK_FALSE(rows[0].eoc.has_value());
  CHECK(*rows[1].eoc == doctest::Approx(2.13).epsilon(0.05));

  ConvergenceConfig zero = cfg;
  zero.horizon = 0.0;
  for (int k : {20, 40, 80}) CHECK(run_convergence_case(zero, k).l2_error == 0.0);

  ConvergenceConfig incompatible = cfg;
  incompatible.problem.theta_diff = 0.0;
  const auto dashes = run_convergence(incompatible, {20, 40}, 1);
  CHECK(dashes[0].stable);
  CHECK_FALSE(dashes[1].stable);
  CHECK_FALSE(dashes[1].eoc.has_value());
  const std::string csv = convergence_csv(incompatible, dashes);
  CHECK(csv.find("\n1,40,25*dx,0.5,0,-,-\n") != std::string::npos);
  CHECK(csv.rfind("# error norm", 0) == 0);
}

TEST_CASE("Burgers outcomes") {
  BurgersConfig upwind;
  upwind.theta_adv = 0.5;
  upwind.theta_diff = 0.0;
  const auto blow = run_burgers_demo(upwind);
  CHECK_FALSE(blow.completed);
  REQUIRE(blow.blowup_time.has_value());
  CHECK(*blow.blowup_time < 2.0);

  BurgersConfig central;
  central.num_cells = 50;
  const auto ok = run_burgers_demo(central);
  CHECK(ok.completed);
  CHECK(ok.final_time == doctest::Approx(2.0));
  REQUIRE(ok.snapshots.size() == 3);
  CHECK(ok.snapshots[1].time == doctest::Approx(1.0));
  CHECK(snapshot_csv(ok.snapshots[0]).rfind("x,u\n", 0) == 0);

  BurgersConfig viscous;
  viscous.num_cells = 20;
  viscous.c = 1e3;
  const auto decay = run_burgers_demo(viscous);
  CHECK(decay.completed);
  for (std::size_t i = 1; i < decay.trace.energy.size(); ++i) {
    CHECK(decay.trace.energy[i] <= decay.trace.energy[i - 1] + 1e-14 * decay.trace.energy[0]);
  }
  // sin has zero mean, so the state decays to zero.
  CHECK(decay.snapshots.back().u.cwiseAbs().maxCoeff() < 1e-6);
}
