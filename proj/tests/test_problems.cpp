#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gsbp/problems.hpp"

using namespace gsbp;

TEST_CASE("manufactured solutions satisfy the PDE") {
  for (auto kind : {SolutionKind::decay, SolutionKind::growth}) {
    const ManufacturedSolution s(kind, 0.7, 0.3);
    const double h = 1e-5;
    for (double x : {-2.0, 0.1, 1.3}) {
      for (double t : {0.0, 0.5, 2.0}) {
        CHECK(std::abs(s.residual(x, t)) < 1e-13);
        const double dt_fd = (s.value(x, t + h) - s.value(x, t - h)) / (2 * h);
        const double dx_fd = (s.value(x + h, t) - s.value(x - h, t)) / (2 * h);
        CHECK(s.dt(x, t) == doctest::Approx(dt_fd).epsilon(1e-8));
        CHECK(s.dx(x, t) == doctest::Approx(dx_fd).epsilon(1e-8));
      }
    }
  }
  CHECK_FALSE(ManufacturedSolution(SolutionKind::decay, 1, 1).has_source());
  CHECK(ManufacturedSolution(SolutionKind::growth, 1, 1).has_source());
  CHECK(solution_kind_from_string("growth") == SolutionKind::growth);
  CHECK(to_string(SolutionKind::decay) == "decay");
  CHECK_THROWS_AS(solution_kind_from_string("steady"), std::invalid_argument);
}

TEST_CASE("configuration checks") {
  AdvDiffConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.compatible());
  cfg.theta_diff = 0.0;
  CHECK_FALSE(cfg.compatible());
  auto bad = [](auto mutate) {
    AdvDiffConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](AdvDiffConfig& c) { c.a = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](AdvDiffConfig& c) { c.c = -1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](AdvDiffConfig& c) { c.theta_adv = 0.7; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](AdvDiffConfig& c) { c.degree = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](AdvDiffConfig& c) { c.num_cells = 1; }).validate(), std::invalid_argument);
}

TEST_CASE("semi-discrete residual vanishes under refinement") {
  // ||F(u) + L u - u_t||_M at the exact solution, for both problems. The
  // pointwise consistency of D^- D^+ is only first order for N = 2.
  for (auto kind : {SolutionKind::decay, SolutionKind::growth}) {
    double previous = 0.0;
    for (int k : {10, 20, 40}) {
      AdvDiffConfig cfg;
      cfg.a = 1.0;
      cfg.c = 0.1;
      cfg.degree = 2;
      cfg.num_cells = k;
      const ManufacturedSolution s(kind, cfg.a, cfg.c);
      const auto disc = semidiscretize(cfg, &s);
      const Vector& x = disc->advection.nodes();
      const double t = 0.4;
      const Vector u = sample(s, x, t);
      Vector f(u.size());
      disc->problem.explicit_rhs(t, u, f);
      Vector ut(u.size());
      for (Eigen::Index j = 0; j < x.size(); ++j) ut[j] = s.dt(x[j], t);
      const Vector r = f + disc->problem.implicit_matrix * u - ut;
      const double err = std::sqrt(disc->problem.energy(r));
      if (previous > 0.0) CHECK(err < 0.6 * previous);
      previous = err;
    }
  }
}

TEST_CASE("sampling and error norm") {
  AdvDiffConfig cfg;
  cfg.num_cells = 8;
  const auto disc = semidiscretize(cfg);
  const ManufacturedSolution s(SolutionKind::decay, cfg.a, cfg.c);
  const Vector u = initial_condition(s, disc->mesh, disc->element);
  CHECK(u.size() == 16);
  const auto& norm = disc->problem.norm;
  CHECK(l2_error(u, s, 0.0, disc->advection.nodes(), norm) == 0.0);
  CHECK(norm.sum() == doctest::Approx(2 * std::numbers::pi));
  CHECK_THROWS_AS(l2_error(Vector::Zero(3), s, 0.0, disc->advection.nodes(), norm),
                  std::invalid_argument);
}

TEST_CASE("semi-discrete energy dissipation for compatible pairs") {
  for (double theta : {0.0, 0.25, 0.5}) {
    AdvDiffConfig cfg;
    cfg.theta_adv = cfg.theta_diff = theta;
    cfg.degree = 2;
    cfg.num_cells = 10;
    const auto disc = semidiscretize(cfg);
    const Vector u = disc->advection.nodes().array().cos() + 0.3;
    Vector f(u.size());
    disc->problem.explicit_rhs(0.0, u, f);
    const Vector rhs = f + disc->problem.implicit_matrix * u;
    CHECK(u.dot(disc->problem.norm.cwiseProduct(rhs)) <= 1e-12);
  }
}

TEST_CASE("Burgers semi-discretization") {
  const auto e = build_lgl(2);
  const auto m = uniform_mesh(-std::numbers::pi, std::numbers::pi, 12);
  const auto central = burgers_rhs(e, m, 0.0, 0.0, 0.1);
  CHECK(central->dissipation.nonZeros() == 0);

  const auto upwind = burgers_rhs(e, m, 0.5, 0.0, 0.1);
  const Vector constant = Vector::Constant(upwind->problem.dim, 0.7);
  Vector out(constant.size());
  upwind->problem.explicit_rhs(0.0, constant, out);
  CHECK(out.cwiseAbs().maxCoeff() < 1e-12);

  // Global Lax-Friedrichs term removes energy.
  const Vector u = upwind->advection.nodes().array().sin().square();
  Vector visc = upwind->dissipation * u;
  CHECK(u.dot(upwind->problem.norm.cwiseProduct(visc)) <= 1e-14);
  CHECK_THROWS_AS(burgers_rhs(e, m, 0.0, 0.0, -1.0), std::invalid_argument);
}
