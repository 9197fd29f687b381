#include "gsbp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gsbp {

Mesh1D::Mesh1D(double x_a, double x_b, std::vector<double> widths)
    : x_a_(x_a), x_b_(x_b), widths_(std::move(widths)) {
  if (!(x_a_ < x_b_) || !std::isfinite(x_a_) || !std::isfinite(x_b_)) {
    throw std::invalid_argument("Mesh1D: require finite x_a < x_b");
  }
  if (widths_.empty()) throw std::invalid_argument("Mesh1D: at least one cell required");
  for (double w : widths_) {
    if (!(w > 0.0)) throw std::invalid_argument("Mesh1D: cell widths must be positive");
  }
  const double total = std::accumulate(widths_.begin(), widths_.end(), 0.0);
  if (std::abs(total - length()) > 1e-12 * length()) {
    throw std::invalid_argument("Mesh1D: widths do not sum to x_b - x_a");
  }
  faces_.resize(widths_.size() + 1);
  faces_[0] = x_a_;
  for (std::size_t i = 0; i < widths_.size(); ++i) faces_[i + 1] = faces_[i] + widths_[i];
  faces_.back() = x_b_;
}

double Mesh1D::max_width() const { return *std::max_element(widths_.begin(), widths_.end()); }

double Mesh1D::min_width() const { return *std::min_element(widths_.begin(), widths_.end()); }

Mesh1D uniform_mesh(double x_a, double x_b, int num_cells) {
  if (num_cells < 1) throw std::invalid_argument("uniform_mesh: K must be positive");
  if (!(x_a < x_b)) throw std::invalid_argument("uniform_mesh: require x_a < x_b");
  const double dx = (x_b - x_a) / num_cells;
  return Mesh1D(x_a, x_b, std::vector<double>(static_cast<std::size_t>(num_cells), dx));
}

Vector physical_nodes(const Mesh1D& mesh, const ReferenceElement& elem) {
  const int np = elem.num_nodes();
  Vector x(mesh.num_cells() * np);
  for (int i = 0; i < mesh.num_cells(); ++i) {
    for (int v = 0; v < np; ++v) {
      // Endpoint nodes map exactly onto the faces.
      const double xi = elem.nodes()[v];
      double xv = mesh.to_physical(i, xi);
      if (xi == -1.0) xv = mesh.cell_left(i);
      if (xi == 1.0) xv = mesh.cell_right(i);
      x[i * np + v] = xv;
    }
  }
  return x;
}

}  // namespace gsbp
