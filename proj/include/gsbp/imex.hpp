#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "gsbp/operators.hpp"

namespace gsbp {

/// Explicit (s+1)-stage RK paired with an s-stage DIRK padded by a zero first
/// row and column, so both parts share the abscissae c.
struct ImexTableau {
  std::string name;
  int order = 1;
  DenseMatrix a_explicit;
  DenseMatrix a_implicit;
  Vector b_explicit;
  Vector b_implicit;
  Vector c;

  int stages() const { return static_cast<int>(c.size()); }

  /// max_i |c_i - sum_j A1_ij| and |c_i - sum_j A2_ij|.
  double row_sum_residual() const;
  bool explicit_strictly_lower() const;
  bool implicit_padded() const;
  /// A2_{s+1,j} == b2_j for j >= 2 (reported, never enforced).
  bool implicit_stiffly_accurate(double tol = 1e-14) const;
};

ImexTableau tableau_imex1();
ImexTableau tableau_imex2();
ImexTableau tableau_imex3();

/// 1, 2, 3 or "imex1", "imex2", "imex3".
ImexTableau tableau_by_order(int order);
ImexTableau tableau_by_name(const std::string& name);

/// Coefficients of the second-order pair.
double imex2_gamma();
double imex2_delta();
/// Middle root of 6x^3 - 18x^2 + 9x - 1, refined by Newton from 0.4358665.
double imex3_gamma();

/// du/dt = F(t, u) + L u with F treated explicitly and the fixed matrix L
/// implicitly. `norm` is the diagonal of the energy matrix M; M L must be
/// symmetric negative semi-definite.
struct ImexSplitProblem {
  int dim = 0;
  std::function<void(double t, const Vector& u, Vector& out)> explicit_rhs;
  SparseMatrix implicit_matrix;
  Vector norm;

  double energy(const Vector& u) const { return u.dot(norm.cwiseProduct(u)); }
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves (I - tau L) x = rhs through the symmetric positive definite form
/// (M - tau M L) x = M rhs. Factorizations are cached per tau.
class ImplicitStageSolver {
 public:
  ImplicitStageSolver(SparseMatrix implicit_matrix, Vector norm);

  Vector solve(double tau, const Vector& rhs);
  std::size_t cached_factorizations() const { return cache_.size(); }

 private:
  struct Factorization;
  Factorization& factor(double tau);
  Vector conjugate_gradient(const SparseMatrix& system, const Vector& b) const;

  SparseMatrix implicit_;
  Vector norm_;
  SparseMatrix m_l_;
  std::map<double, std::shared_ptr<Factorization>> cache_;
};

/// One-shot form of ImplicitStageSolver::solve.
Vector solve_implicit_stage(const SparseMatrix& implicit_matrix, const Vector& norm, double tau,
                            const Vector& rhs);

/// Executes the stage recursion of the padded IMEX scheme.
class ImexStepper {
 public:
  ImexStepper(ImexTableau tableau, const ImexSplitProblem& problem);

  Vector step(const Vector& u, double t, double dt);
  const ImexTableau& tableau() const { return tableau_; }

 private:
  ImexTableau tableau_;
  const ImexSplitProblem& problem_;
  ImplicitStageSolver solver_;
  std::vector<Vector> stage_;
  std::vector<Vector> explicit_eval_;
  std::vector<Vector> implicit_eval_;
};

Vector step(const ImexTableau& tableau, const ImexSplitProblem& problem, const Vector& u,
            double t, double dt);

struct EnergyTrace {
  std::vector<int> step;
  std::vector<double> time;
  std::vector<double> energy;

  void push(int s, double t, double e) {
    step.push_back(s);
    time.push_back(t);
    energy.push_back(e);
  }
  /// Columns step,t,energy.
  std::string to_csv() const;
};

/// Called after every step with (step index, time, ||u||_M^2, state); return
/// false to stop early.
using StepObserver = std::function<bool(int, double, double, const Vector&)>;

struct IntegrationResult {
  Vector state;
  double time = 0.0;
  int steps = 0;
  bool stopped_early = false;
  EnergyTrace trace;
};

/// Number of steps and the length of the last one for a horizon T; the final
/// step is truncated so the last time equals T.
struct StepPlan {
  int steps;
  double last_dt;
};
StepPlan plan_steps(double dt, double horizon);

IntegrationResult integrate(const ImexTableau& tableau, const ImexSplitProblem& problem,
                            const Vector& u0, double dt, double horizon,
                            const StepObserver& observer = {});

}  // namespace gsbp
