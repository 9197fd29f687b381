#pragma once

#include <Eigen/Dense>

namespace gsbp {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 16;

/// Nodal machinery on the reference cell (-1, 1): quadrature nodes and
/// weights, the Lagrange differentiation matrix and the boundary
/// interpolation vectors L(-1), L(1).
///
/// The mass matrix is diagonal with entries equal to the quadrature weights,
/// so it is stored as the weight vector only.
class ReferenceElement {
 public:
  ReferenceElement(int degree, Vector nodes, Vector weights);

  int degree() const { return degree_; }
  int num_nodes() const { return degree_ + 1; }

  const Vector& nodes() const { return nodes_; }
  const Vector& weights() const { return weights_; }

  /// D_jk = L_k'(xi_j).
  const DenseMatrix& diff() const { return diff_; }
  DenseMatrix mass() const { return weights_.asDiagonal(); }

  /// Lagrange basis evaluated at -1 and +1.
  const Vector& left() const { return left_; }
  const Vector& right() const { return right_; }

  /// Values of all Lagrange basis polynomials at x (barycentric form).
  Vector lagrange_at(double x) const;

 private:
  int degree_;
  Vector nodes_;
  Vector weights_;
  Vector bary_;
  DenseMatrix diff_;
  Vector left_;
  Vector right_;
};

/// Legendre polynomial P_n(x) and its derivative, by the three-term recurrence.
struct LegendreValue {
  double p;
  double dp;
};
LegendreValue legendre(int n, double x);

/// Legendre-Gauss-Lobatto element of degree N (N+1 nodes including +-1).
/// Throws std::invalid_argument for N outside [1, 16].
ReferenceElement build_lgl(int degree);

DenseMatrix diff_matrix(const ReferenceElement& elem);

struct BoundaryVectors {
  Vector left;
  Vector right;
};
BoundaryVectors boundary_vectors(const ReferenceElement& elem);

}  // namespace gsbp
