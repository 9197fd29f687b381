#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gsbp/operators.hpp"

using namespace gsbp;

namespace {

double max_abs(const DenseMatrix& a) { return a.cwiseAbs().maxCoeff(); }

DenseMatrix dense(const SparseMatrix& a) { return DenseMatrix(a); }

GlobalOperatorSet make(int n, int k, double theta, Topology topo, double xa = -std::numbers::pi,
                       double xb = std::numbers::pi) {
  return GlobalOperatorSet(build_lgl(n), uniform_mesh(xa, xb, k), theta, topo);
}

// -theta * sum of squared interface jumps, from the nodal traces.
double jump_oracle(const ReferenceElement& e, int k, double theta, bool periodic,
                   const Vector& u) {
  const int np = e.num_nodes();
  double sum = 0.0;
  const int faces = periodic ? k : k - 1;
  for (int i = 0; i < faces; ++i) {
    const int right_cell = (i + 1) % k;
    const double left_trace = e.right().dot(u.segment(i * np, np));
    const double right_trace = e.left().dot(u.segment(right_cell * np, np));
    sum += (right_trace - left_trace) * (right_trace - left_trace);
  }
  return -theta * sum;
}

}  // namespace

TEST_CASE("central operator has no dissipation") {
  for (auto topo : {Topology::bounded, Topology::periodic}) {
    const auto ops = make(2, 6, 0.0, topo);
    CHECK(max_abs(dense(ops.d_minus()) - dense(ops.d_plus())) == 0.0);
    CHECK(ops.dissipation().nonZeros() == 0);
  }
}

TEST_CASE("D+ (theta) equals D- (-theta)") {
  const auto e = build_lgl(3);
  const auto m = uniform_mesh(0.0, 1.0, 5);
  for (double theta : {0.1, 0.25, 0.5}) {
    const GlobalOperatorSet ops(e, m, theta, Topology::bounded);
    const SparseMatrix dm = assemble_d_minus(e, m, -theta, Topology::bounded);
    CHECK(max_abs(dense(ops.d_plus()) - dense(dm)) == 0.0);
  }
}

TEST_CASE("N = 1, K = 2 periodic wrap entry") {
  const auto ops = make(1, 2, 0.5, Topology::periodic, 0.0, 2.0);
  // First node of cell 1 couples to the last node of cell 2.
  CHECK(ops.d_minus().coeff(0, 3) == doctest::Approx(-2.0));
  // Upwinding: no coupling to the right neighbour.
  CHECK(ops.d_minus().coeff(1, 2) == 0.0);
}

TEST_CASE("block layout of local_blocks") {
  const auto e = build_lgl(2);
  const auto b = local_blocks(e, 0.5);
  CHECK(max_abs(b.upper) == 0.0);
  // The left face enters the first cell only through the periodic wrap.
  CHECK((b.interior - b.left_boundary)(0, 0) == doctest::Approx(1.0 / e.weights()[0]));
  CHECK(max_abs(b.interior - b.right_boundary) < 1e-15);
  CHECK(b.lower(0, 2) == doctest::Approx(-1.0 / e.weights()[0]));
}

TEST_CASE("bounded operators are exact on monomials") {
  for (int n = 1; n <= 4; ++n) {
    for (double theta : {0.0, 0.3, 0.5}) {
      CAPTURE(n);
      CAPTURE(theta);
      const auto ops = make(n, 7, theta, Topology::bounded, -1.0, 2.0);
      const Vector& x = ops.nodes();
      for (int k = 1; k <= n; ++k) {
        const Vector xk = x.array().pow(k);
        const Vector dxk = k * x.array().pow(k - 1);
        CHECK((ops.d_minus() * xk - dxk).cwiseAbs().maxCoeff() < 1e-11);
        CHECK((ops.d_plus() * xk - dxk).cwiseAbs().maxCoeff() < 1e-11);
      }
    }
  }
}

TEST_CASE("dissipation jump identity") {
  const auto e = build_lgl(2);
  const int k = 5;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto topo : {Topology::bounded, Topology::periodic}) {
    for (double theta : {0.0, 0.25, 0.5}) {
      const GlobalOperatorSet ops(e, uniform_mesh(0.0, 1.0, k), theta, topo);
      Vector u(ops.size());
      for (auto& v : u) v = dist(rng);
      const double via_matrix = u.dot(ops.dissipation() * u);
      const double direct = jump_oracle(e, k, theta, topo == Topology::periodic, u);
      CHECK(via_matrix == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("continuous data carries no dissipation") {
  const auto ops = make(3, 8, 0.5, Topology::periodic);
  const Vector u = ops.nodes().array().sin();
  CHECK(std::abs(u.dot(ops.dissipation() * u)) < 1e-13);
}

TEST_CASE("single interface jump of size two") {
  const auto ops = make(1, 4, 0.5, Topology::bounded, 0.0, 4.0);
  Vector u = Vector::Zero(ops.size());
  u.tail(4).setConstant(2.0);  // cells 3 and 4
  CHECK(u.dot(ops.dissipation() * u) == doctest::Approx(-2.0));
}

TEST_CASE("negative theta flips the dissipation sign") {
  const auto ops = make(2, 6, -0.25, Topology::periodic);
  const auto report = verify_axioms(ops);
  CHECK(report.dissipation_max_eigenvalue > 1e-3);
  CHECK_FALSE(report.dissipation_passed());
  CHECK_FALSE(report.all_passed());
}

TEST_CASE("axioms hold on uniform and non-uniform meshes") {
  for (int n = 1; n <= 3; ++n) {
    for (int k : {4, 20}) {
      for (double theta : {0.0, 0.25, 0.5}) {
        for (auto topo : {Topology::bounded, Topology::periodic}) {
          CAPTURE(n);
          CAPTURE(k);
          CAPTURE(theta);
          const auto r = verify_axioms(make(n, k, theta, topo));
          CHECK(r.all_passed());
          CHECK(r.sbp_residual < 1e-12);
        }
      }
    }
  }
  const Mesh1D graded(0.0, 1.0, {0.05, 0.1, 0.15, 0.3, 0.4});
  for (auto topo : {Topology::bounded, Topology::periodic}) {
    const auto r = verify_axioms(GlobalOperatorSet(build_lgl(3), graded, 0.5, topo));
    CHECK(r.all_passed());
  }
}

TEST_CASE("report serializations") {
  const auto r = verify_axioms(make(1, 4, 0.5, Topology::bounded));
  const std::string text = r.to_text();
  CHECK(text.find("topology: bounded\n") != std::string::npos);
  CHECK(text.find("all: pass\n") != std::string::npos);
  const std::string header = CertificationReport::csv_header();
  const std::string row = r.csv_row();
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}

TEST_CASE("boundary operator and interpolation vectors") {
  const auto ops = make(2, 3, 0.5, Topology::bounded, 0.0, 3.0);
  CHECK(ops.t_alpha()[0] == doctest::Approx(1.0));
  CHECK(ops.t_beta()[ops.size() - 1] == doctest::Approx(1.0));
  CHECK(ops.boundary_operator().coeff(0, 0) == doctest::Approx(-1.0));
  CHECK(ops.boundary_operator().coeff(ops.size() - 1, ops.size() - 1) == doctest::Approx(1.0));
  const auto periodic = make(2, 3, 0.5, Topology::periodic, 0.0, 3.0);
  CHECK(periodic.t_alpha().size() == 0);
  CHECK(periodic.boundary_operator().nonZeros() == 0);
}

TEST_CASE("second derivative operators") {
  const auto e = build_lgl(2);
  const auto m = uniform_mesh(-std::numbers::pi, std::numbers::pi, 10);
  CHECK(classify_diffusion_flux(0.0) == DiffusionFlux::br1);
  CHECK(classify_diffusion_flux(0.5) == DiffusionFlux::ldg_a);
  CHECK(classify_diffusion_flux(-0.5) == DiffusionFlux::ldg_b);
  CHECK(classify_diffusion_flux(0.2) == DiffusionFlux::general);
  CHECK(to_string(DiffusionFlux::ldg_a) == "LDG_a");

  for (double theta : {-0.5, 0.0, 0.25, 0.5}) {
    const auto s = second_derivative(e, m, theta, Topology::periodic);
    const Vector ones = Vector::Ones(s.d2.rows());
    CHECK((s.d2 * ones).cwiseAbs().maxCoeff() < 1e-11);
    const DenseMatrix md2 = s.first.norm_diagonal().asDiagonal() * dense(s.d2);
    const DenseMatrix dp = dense(s.first.d_plus());
    const DenseMatrix energy = dp.transpose() * s.first.norm_diagonal().asDiagonal() * dp;
    CHECK(max_abs(md2 + energy) < 1e-12 * std::max(1.0, max_abs(energy)));
  }
  // LDG_b is the LDG_a product in reverse order.
  const auto b = second_derivative(e, m, -0.5, Topology::periodic);
  const auto a = second_derivative(e, m, 0.5, Topology::periodic);
  const DenseMatrix reversed = dense(a.first.d_plus()) * dense(a.first.d_minus());
  CHECK(max_abs(dense(b.d2) - reversed) < 1e-12);
}

TEST_CASE("bounded D2 on polynomials at interior nodes") {
  const int n = 3;
  const auto e = build_lgl(n);
  const auto m = uniform_mesh(0.0, 2.0, 6);
  const auto s = second_derivative(e, m, 0.5, Topology::bounded);
  const Vector& x = s.first.nodes();
  for (int k = 1; k <= n - 1; ++k) {
    const Vector f = x.array().pow(k + 1);
    const Vector expected = (k + 1.0) * k * x.array().pow(k - 1);
    const Vector got = s.d2 * f;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x[j] == 0.0 || x[j] == 2.0) continue;
      CHECK(std::abs(got[j] - expected[j]) < 1e-9);
    }
  }
}

TEST_CASE("SAT advection energy form") {
  const double a = 1.0;
  for (double theta : {0.0, 0.25, 0.5}) {
    const auto ops = make(2, 6, theta, Topology::bounded, 0.0, 1.0);
    const auto rhs = sat_advection_rhs(ops, a, -a / 2);
    const DenseMatrix form = sat_energy_form(ops, rhs, a);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(0.5 * (form + form.transpose()));
    CHECK(eig.eigenvalues().maxCoeff() <= 1e-10);
    CHECK((rhs * Vector::Zero(ops.size())).norm() == 0.0);
  }
  const auto ops = make(1, 4, 0.0, Topology::bounded, 0.0, 1.0);
  const DenseMatrix form = sat_energy_form(ops, sat_advection_rhs(ops, a, 0.0), a);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(0.5 * (form + form.transpose()));
  CHECK(eig.eigenvalues().maxCoeff() > 1e-6);
  CHECK_THROWS_AS(sat_advection_rhs(make(1, 4, 0.0, Topology::periodic), a, -0.5),
                  std::invalid_argument);
}

TEST_CASE("theta range and topology names") {
  CHECK_THROWS_AS(make(1, 4, 0.6, Topology::bounded), std::invalid_argument);
  CHECK_THROWS_AS(make(1, 4, -0.51, Topology::periodic), std::invalid_argument);
  CHECK(topology_from_string("periodic") == Topology::periodic);
  CHECK(to_string(Topology::bounded) == "bounded");
  CHECK_THROWS_AS(topology_from_string("wrap"), std::invalid_argument);
}

TEST_CASE("largest eigenvalue of a sparse symmetric matrix") {
  SparseMatrix a(5, 5);
  a.insert(1, 1) = -2.0;
  a.insert(3, 3) = -1.0;
  a.makeCompressed();
  // Inactive rows contribute zero eigenvalues.
  CHECK(max_eigenvalue_symmetric(a) == 0.0);
  SparseMatrix full(2, 2);
  full.insert(0, 0) = -2.0;
  full.insert(1, 1) = -1.0;
  CHECK(max_eigenvalue_symmetric(full) == doctest::Approx(-1.0));
}
