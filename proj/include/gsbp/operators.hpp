#pragma once

#include <optional>
#include <string>

#include <Eigen/SparseCore>

#include "gsbp/mesh.hpp"
#include "gsbp/reference_element.hpp"

namespace gsbp {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class Topology { periodic, bounded };

std::string to_string(Topology topology);
Topology topology_from_string(const std::string& name);

/// Unscaled (reference-cell) blocks of D^-(theta). A cell's diagonal block is
/// `interior` when both neighbours exist, `left_boundary` for the first cell
/// and `right_boundary` for the last cell of a bounded mesh. `upper` couples
/// a cell to its right neighbour, `lower` to its left neighbour. Multiply by
/// 2 / dx_i to obtain the physical blocks.
struct LocalBlocks {
  DenseMatrix interior;
  DenseMatrix upper;
  DenseMatrix lower;
  DenseMatrix left_boundary;
  DenseMatrix right_boundary;
};

LocalBlocks local_blocks(const ReferenceElement& elem, double theta);

/// Dual pair of global upwind operators D^-(theta), D^+(theta) = D^-(-theta)
/// built from the nodal DG scheme with the theta-family of interface fluxes,
/// together with the quantities that certify the pair: the diagonal norm M,
/// the boundary operator B, Q^+- = M D^+- - B/2 and the dissipation matrix
/// C = (Q^+ - Q^-)/2.
///
/// For the periodic topology B is zero and the boundary vectors are empty.
class GlobalOperatorSet {
 public:
  GlobalOperatorSet(const ReferenceElement& elem, const Mesh1D& mesh, double theta,
                    Topology topology);

  double theta() const { return theta_; }
  Topology topology() const { return topology_; }
  int degree() const { return degree_; }
  int num_cells() const { return num_cells_; }
  int size() const { return static_cast<int>(norm_.size()); }
  int block_size() const { return degree_ + 1; }

  const SparseMatrix& d_minus() const { return d_minus_; }
  const SparseMatrix& d_plus() const { return d_plus_; }

  /// Diagonal of M.
  const Vector& norm_diagonal() const { return norm_; }
  SparseMatrix norm_matrix() const;

  const SparseMatrix& boundary_operator() const { return boundary_; }
  SparseMatrix q_minus() const;
  SparseMatrix q_plus() const;
  const SparseMatrix& dissipation() const { return dissipation_; }

  /// Global boundary interpolation vectors; empty for periodic topology.
  const Vector& t_alpha() const { return t_alpha_; }
  const Vector& t_beta() const { return t_beta_; }

  const Vector& nodes() const { return nodes_; }
  double x_a() const { return x_a_; }
  double x_b() const { return x_b_; }

  double inner(const Vector& u, const Vector& v) const;
  double energy(const Vector& u) const { return inner(u, u); }

 private:
  double theta_;
  Topology topology_;
  int degree_;
  int num_cells_;
  double x_a_;
  double x_b_;
  Vector nodes_;
  Vector norm_;
  SparseMatrix d_minus_;
  SparseMatrix d_plus_;
  SparseMatrix boundary_;
  SparseMatrix dissipation_;
  Vector t_alpha_;
  Vector t_beta_;
};

/// Throws std::invalid_argument when theta is outside [-1/2, 1/2].
GlobalOperatorSet assemble_first_derivative(const ReferenceElement& elem, const Mesh1D& mesh,
                                            double theta, Topology topology);

/// Only D^-(theta); used by the pair assembly.
SparseMatrix assemble_d_minus(const ReferenceElement& elem, const Mesh1D& mesh, double theta,
                              Topology topology);

SparseMatrix dissipation_matrix(const GlobalOperatorSet& ops);

enum class DiffusionFlux { br1, ldg_a, ldg_b, general };

std::string to_string(DiffusionFlux flux);
DiffusionFlux classify_diffusion_flux(double theta_diff);

/// D2 = D^-(theta) D^+(theta). theta = 0 is BR1, +1/2 is LDG_a (q* = q^-,
/// u* = u^+) and -1/2 is LDG_b.
struct SecondDerivativeOperator {
  double theta_diff;
  DiffusionFlux flux;
  SparseMatrix d2;
  GlobalOperatorSet first;
};

SecondDerivativeOperator second_derivative(const ReferenceElement& elem, const Mesh1D& mesh,
                                           double theta_diff, Topology topology);

/// Outcome of checking the upwind SBP axioms on an assembled pair. Each
/// residual is a max-norm; a check passes at `tolerance`.
struct CertificationReport {
  int degree = 0;
  int num_cells = 0;
  double theta = 0.0;
  Topology topology = Topology::bounded;
  double tolerance = 1e-10;

  // (i) accuracy: max_k ||D^+- x^k - k x^(k-1)||_max / max(1, ||x^k||_max), k <= N.
  std::optional<double> accuracy_residual;
  // (ii) norm matrix positive diagonal; boundary interpolation residual.
  double norm_min = 0.0;
  std::optional<double> boundary_residual;
  // (iii) ||Q^+ + (Q^-)^T||_max.
  double sbp_residual = 0.0;
  // (iv) largest eigenvalue of C and ||C - C^T||_max.
  double dissipation_max_eigenvalue = 0.0;
  double dissipation_asymmetry = 0.0;
  // Periodic only: ||M D2 + (D^+)^T M D^+||_max.
  std::optional<double> second_derivative_residual;

  bool accuracy_passed() const;
  bool norm_passed() const;
  bool sbp_passed() const;
  bool dissipation_passed() const;
  bool second_derivative_passed() const;
  bool all_passed() const;

  /// "key: value" lines.
  std::string to_text() const;
  static std::string csv_header();
  std::string csv_row() const;
};

CertificationReport verify_axioms(const GlobalOperatorSet& ops, double tolerance = 1e-10);

/// Largest eigenvalue of a symmetric sparse matrix restricted to the rows and
/// columns carrying nonzeros (the remaining eigenvalues are zero).
double max_eigenvalue_symmetric(const SparseMatrix& a);

/// Right-hand side operator u -> -a D^- u + sigma M^{-1} t_alpha t_alpha^T u
/// for inflow at x_a. Requires the bounded topology and a > 0.
SparseMatrix sat_advection_rhs(const GlobalOperatorSet& ops, double a, double sigma);

/// M R + R^T M + a t_beta t_beta^T for R = sat_advection_rhs(...). Negative
/// semi-definite whenever sigma <= -a/2.
DenseMatrix sat_energy_form(const GlobalOperatorSet& ops, const SparseMatrix& rhs, double a);

}  // namespace gsbp
