#include <doctest.h>

#include <numbers>
#include <stdexcept>

#include "gsbp/mesh.hpp"

using namespace gsbp;

TEST_CASE("uniform mesh geometry") {
  const auto m = uniform_mesh(-std::numbers::pi, std::numbers::pi, 20);
  CHECK(m.num_cells() == 20);
  CHECK(m.width(7) == doctest::Approx(2 * std::numbers::pi / 20));
  CHECK(m.cell_left(0) == -std::numbers::pi);
  CHECK(m.cell_right(19) == doctest::Approx(std::numbers::pi));
  CHECK(m.quasi_uniformity() == doctest::Approx(1.0));
  CHECK(m.to_physical(3, -1.0) == doctest::Approx(m.cell_left(3)));
  CHECK(m.to_physical(3, 1.0) == doctest::Approx(m.cell_right(3)));
}

TEST_CASE("single-cell mesh is allowed") {
  const auto m = uniform_mesh(0.0, 2.0, 1);
  CHECK(m.num_cells() == 1);
  CHECK(m.width(0) == 2.0);
}

TEST_CASE("physical nodes") {
  const auto e = build_lgl(2);
  const auto m = uniform_mesh(0.0, 1.0, 4);
  const Vector x = physical_nodes(m, e);
  REQUIRE(x.size() == 12);
  CHECK(x[0] == 0.0);
  CHECK(x[11] == 1.0);
  CHECK(x[1] == doctest::Approx(0.125));
  // Interface coordinates are duplicated.
  CHECK(x[2] == x[3]);
  CHECK(x[5] == x[6]);
}

TEST_CASE("non-uniform widths") {
  const Mesh1D m(0.0, 1.0, {0.1, 0.2, 0.3, 0.4});
  CHECK(m.min_width() == doctest::Approx(0.1));
  CHECK(m.max_width() == doctest::Approx(0.4));
  CHECK(m.quasi_uniformity() == doctest::Approx(0.25));
  CHECK(m.cell_left(2) == doctest::Approx(0.3));
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS_AS(uniform_mesh(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_mesh(1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Mesh1D(0.0, 1.0, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Mesh1D(0.0, 1.0, {1.2, -0.2}), std::invalid_argument);
}
