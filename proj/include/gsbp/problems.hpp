#pragma once

#include <memory>
#include <string>

#include "gsbp/imex.hpp"
#include "gsbp/mesh.hpp"
#include "gsbp/operators.hpp"
#include "gsbp/reference_element.hpp"

namespace gsbp {

/// u_t + a u_x = c u_xx (+ g) on a periodic interval, discretized with
/// D^-(theta_adv) for advection and D2 = D^-(theta_diff) D^+(theta_diff)
/// for diffusion.
struct AdvDiffConfig {
  double a = 0.1;
  double c = 0.1;
  double theta_adv = 0.5;
  double theta_diff = 0.5;
  int degree = 1;
  int num_cells = 20;
  double x_a = -3.141592653589793;
  double x_b = 3.141592653589793;

  /// The hypothesis D2 = D^- D^+ of the fully discrete energy estimates.
  bool compatible() const { return theta_adv == theta_diff; }
  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

enum class SolutionKind { decay, growth };

std::string to_string(SolutionKind kind);
SolutionKind solution_kind_from_string(const std::string& name);

/// Closed-form solutions used for stability scans and convergence studies.
///   decay:  u = exp(-c t) sin(x - a t), solves u_t + a u_x = c u_xx
///   growth: u = exp(c t) sin(x), solves u_t + a u_x = c u_xx + g with
///           g = exp(c t) (2 c sin x + a cos x)
class ManufacturedSolution {
 public:
  ManufacturedSolution(SolutionKind kind, double a, double c);

  SolutionKind kind() const { return kind_; }
  double a() const { return a_; }
  double c() const { return c_; }
  bool has_source() const { return kind_ == SolutionKind::growth; }

  double value(double x, double t) const;
  double dt(double x, double t) const;
  double dx(double x, double t) const;
  double dxx(double x, double t) const;
  double source(double x, double t) const;

  /// u_t + a u_x - c u_xx - g at (x, t).
  double residual(double x, double t) const;

 private:
  SolutionKind kind_;
  double a_;
  double c_;
};

/// Assembled operators plus the split right-hand side.
struct AdvDiffDiscretization {
  AdvDiffConfig config;
  ReferenceElement element;
  Mesh1D mesh;
  GlobalOperatorSet advection;
  SecondDerivativeOperator diffusion;
  ImexSplitProblem problem;
};

/// The problem captures pointers into the returned object, so it is handed
/// out behind a unique_ptr to keep those addresses stable.
std::unique_ptr<AdvDiffDiscretization> semidiscretize(
    const AdvDiffConfig& config, const ManufacturedSolution* source = nullptr);

/// Nodal interpolation of the solution at time t.
Vector initial_condition(const ManufacturedSolution& solution, const Mesh1D& mesh,
                         const ReferenceElement& elem, double t = 0.0);
Vector sample(const ManufacturedSolution& solution, const Vector& nodes, double t);

/// ||state - u(., t)||_M with u sampled at the nodes.
double l2_error(const Vector& state, const ManufacturedSolution& solution, double t,
                const Vector& nodes, const Vector& norm);

/// Viscous Burgers u_t + (u^2/2)_x = c u_xx:
///   F(u) = -((D^+ + D^-)/2) f(u) + ||u||_inf M^{-1} C u,  f = u^2/2,
///   L = c D2(theta_diff).
/// theta_adv = 1/2 gives global Lax-Friedrichs dissipation, theta_adv = 0
/// the central variant with C = 0.
struct BurgersDiscretization {
  ReferenceElement element;
  Mesh1D mesh;
  GlobalOperatorSet advection;
  SecondDerivativeOperator diffusion;
  SparseMatrix central;      // (D^+ + D^-) / 2
  SparseMatrix dissipation;  // M^{-1} C = (D^+ - D^-) / 2
  double c;
  ImexSplitProblem problem;
};

/// Requires the periodic setting; the mesh is used as given.
std::unique_ptr<BurgersDiscretization> burgers_rhs(const ReferenceElement& elem,
                                                   const Mesh1D& mesh, double theta_adv,
                                                   double theta_diff, double c);

}  // namespace gsbp
