#pragma once

#include <vector>

#include "gsbp/reference_element.hpp"

namespace gsbp {

/// Partition of (x_a, x_b) into K cells I_i = (x_i, x_{i+1}).
class Mesh1D {
 public:
  /// Cells are laid out left to right with the given widths; the widths must
  /// be positive and sum to x_b - x_a (relative tolerance 1e-12).
  Mesh1D(double x_a, double x_b, std::vector<double> widths);

  double x_a() const { return x_a_; }
  double x_b() const { return x_b_; }
  double length() const { return x_b_ - x_a_; }
  int num_cells() const { return static_cast<int>(widths_.size()); }

  double width(int i) const { return widths_[i]; }
  const std::vector<double>& widths() const { return widths_; }
  double max_width() const;
  double min_width() const;

  /// Left endpoint of cell i.
  double cell_left(int i) const { return faces_[i]; }
  double cell_right(int i) const { return faces_[i + 1]; }

  /// min width / max width.
  double quasi_uniformity() const { return min_width() / max_width(); }

  /// Affine map from the reference cell onto cell i.
  double to_physical(int i, double xi) const {
    return 0.5 * xi * widths_[i] + 0.5 * (faces_[i] + faces_[i + 1]);
  }

 private:
  double x_a_;
  double x_b_;
  std::vector<double> widths_;
  std::vector<double> faces_;
};

Mesh1D uniform_mesh(double x_a, double x_b, int num_cells);

/// Nodes of every cell in cell-major order (length K(N+1)). Interface
/// coordinates appear twice.
Vector physical_nodes(const Mesh1D& mesh, const ReferenceElement& elem);

}  // namespace gsbp
