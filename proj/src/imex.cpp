#include "gsbp/imex.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>

namespace gsbp {

double ImexTableau::row_sum_residual() const {
  double r = 0.0;
  for (int i = 0; i < stages(); ++i) {
    r = std::max(r, std::abs(c[i] - a_explicit.row(i).sum()));
    r = std::max(r, std::abs(c[i] - a_implicit.row(i).sum()));
  }
  return r;
}

bool ImexTableau::explicit_strictly_lower() const {
  for (int i = 0; i < stages(); ++i) {
    for (int j = i; j < stages(); ++j) {
      if (a_explicit(i, j) != 0.0) return false;
    }
  }
  return true;
}

bool ImexTableau::implicit_padded() const {
  for (int i = 0; i < stages(); ++i) {
    for (int j = i + 1; j < stages(); ++j) {
      if (a_implicit(i, j) != 0.0) return false;
    }
  }
  return a_implicit.row(0).isZero(0.0) && a_implicit.col(0).isZero(0.0) && b_implicit[0] == 0.0;
}

bool ImexTableau::implicit_stiffly_accurate(double tol) const {
  const int last = stages() - 1;
  for (int j = 1; j < stages(); ++j) {
    if (std::abs(a_implicit(last, j) - b_implicit[j]) > tol) return false;
  }
  return true;
}

double imex2_gamma() { return 1.0 - std::sqrt(2.0) / 2.0; }

double imex2_delta() { return 1.0 - 1.0 / (2.0 * imex2_gamma()); }

double imex3_gamma() {
  double x = 0.4358665;
  for (int it = 0; it < 50; ++it) {
    const double f = ((6.0 * x - 18.0) * x + 9.0) * x - 1.0;
    const double df = (18.0 * x - 36.0) * x + 9.0;
    const double dx = f / df;
    x -= dx;
    if (std::abs(dx) < 1e-17) break;
  }
  return x;
}

ImexTableau tableau_imex1() {
  ImexTableau t;
  t.name = "imex1";
  t.order = 1;
  t.a_explicit = DenseMatrix::Zero(2, 2);
  t.a_implicit = DenseMatrix::Zero(2, 2);
  t.a_explicit(1, 0) = 1.0;
  t.a_implicit(1, 1) = 1.0;
  t.b_explicit = Vector::Zero(2);
  t.b_implicit = Vector::Zero(2);
  t.b_explicit[0] = 1.0;
  t.b_implicit[1] = 1.0;
  t.c = Vector::Zero(2);
  t.c[1] = 1.0;
  return t;
}

ImexTableau tableau_imex2() {
  const double g = imex2_gamma();
  const double d = imex2_delta();
  ImexTableau t;
  t.name = "imex2";
  t.order = 2;
  t.a_explicit = DenseMatrix::Zero(3, 3);
  t.a_explicit(1, 0) = g;
  t.a_explicit(2, 0) = d;
  t.a_explicit(2, 1) = 1.0 - d;
  t.a_implicit = DenseMatrix::Zero(3, 3);
  t.a_implicit(1, 1) = g;
  t.a_implicit(2, 1) = 1.0 - g;
  t.a_implicit(2, 2) = g;
  t.b_explicit = t.a_explicit.row(2).transpose();
  t.b_implicit = t.a_implicit.row(2).transpose();
  t.c = Vector(3);
  t.c << 0.0, g, 1.0;
  return t;
}

ImexTableau tableau_imex3() {
  const double g = imex3_gamma();
  const double b1 = -1.5 * g * g + 4.0 * g - 0.25;
  const double b2 = 1.5 * g * g - 5.0 * g + 1.25;
  const double a1 = -0.35;
  const double a2 = (1.0 / 3.0 - 2.0 * g * g - 2.0 * b2 * a1 * g) / (g * (1.0 - g));
  const double c3 = 0.5 * (1.0 + g);

  ImexTableau t;
  t.name = "imex3";
  t.order = 3;
  t.a_explicit = DenseMatrix::Zero(4, 4);
  t.a_explicit(1, 0) = g;
  t.a_explicit(2, 0) = c3 - a1;
  t.a_explicit(2, 1) = a1;
  t.a_explicit(3, 1) = 1.0 - a2;
  t.a_explicit(3, 2) = a2;
  t.a_implicit = DenseMatrix::Zero(4, 4);
  t.a_implicit(1, 1) = g;
  t.a_implicit(2, 1) = 0.5 * (1.0 - g);
  t.a_implicit(2, 2) = g;
  t.a_implicit(3, 1) = b1;
  t.a_implicit(3, 2) = b2;
  t.a_implicit(3, 3) = g;
  t.b_explicit = Vector(4);
  t.b_explicit << 0.0, b1, b2, g;
  t.b_implicit = t.b_explicit;
  t.c = Vector(4);
  t.c << 0.0, g, c3, 1.0;
  return t;
}

ImexTableau tableau_by_order(int order) {
  switch (order) {
    case 1: return tableau_imex1();
    case 2: return tableau_imex2();
    case 3: return tableau_imex3();
    default: throw std::invalid_argument("no IMEX tableau of order " + std::to_string(order));
  }
}

ImexTableau tableau_by_name(const std::string& name) {
  if (name == "imex1" || name == "1") return tableau_imex1();
  if (name == "imex2" || name == "2") return tableau_imex2();
  if (name == "imex3" || name == "3") return tableau_imex3();
  throw std::invalid_argument("unknown IMEX tableau '" + name + "'");
}

// ---------------------------------------------------------------------------

using ColMatrix = Eigen::SparseMatrix<double>;

struct ImplicitStageSolver::Factorization {
  ColMatrix system;
  Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  bool direct_ok = false;
};

ImplicitStageSolver::ImplicitStageSolver(SparseMatrix implicit_matrix, Vector norm)
    : implicit_(std::move(implicit_matrix)), norm_(std::move(norm)) {
  if (implicit_.rows() != implicit_.cols() || implicit_.rows() != norm_.size()) {
    throw std::invalid_argument("ImplicitStageSolver: inconsistent sizes");
  }
  m_l_ = norm_.asDiagonal() * implicit_;
}

ImplicitStageSolver::Factorization& ImplicitStageSolver::factor(double tau) {
  auto found = cache_.find(tau);
  if (found != cache_.end()) return *found->second;

  auto f = std::make_shared<Factorization>();
  SparseMatrix system = -tau * m_l_;
  for (int j = 0; j < system.rows(); ++j) system.coeffRef(j, j) += norm_[j];
  f->system = ColMatrix(system);
  f->system.makeCompressed();
  f->ldlt.compute(f->system);
  f->direct_ok = f->ldlt.info() == Eigen::Success;
  return *cache_.emplace(tau, std::move(f)).first->second;
}

Vector ImplicitStageSolver::conjugate_gradient(const SparseMatrix& system, const Vector& b) const {
  Eigen::ConjugateGradient<ColMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(10 * static_cast<int>(b.size()));
  const ColMatrix col(system);
  cg.compute(col);
  Vector x = cg.solve(b);
  if (cg.info() != Eigen::Success) {
    throw SolverError("implicit stage: conjugate gradient did not converge within " +
                      std::to_string(10 * b.size()) + " iterations");
  }
  return x;
}

Vector ImplicitStageSolver::solve(double tau, const Vector& rhs) {
  if (tau < 0.0) throw std::invalid_argument("implicit stage: tau must be non-negative");
  if (rhs.size() != norm_.size()) throw std::invalid_argument("implicit stage: size mismatch");
  if (tau == 0.0) return rhs;

  Factorization& f = factor(tau);
  const Vector b = norm_.cwiseProduct(rhs);

  // Backward-error check on the symmetrized system; the bound scales with
  // the size of the terms so that large tau does not produce false alarms.
  auto acceptable = [&](const Vector& x) {
    if (!x.allFinite()) return false;
    const Vector ax = f.system * x;
    const double scale = b.norm() + ax.norm() + (norm_.cwiseProduct(x)).norm();
    return (ax - b).norm() <= 1e-10 * scale;
  };

  if (f.direct_ok) {
    Vector x = f.ldlt.solve(b);
    if (acceptable(x)) {
      // One step of iterative refinement.
      const Vector r = b - f.system * x;
      x += f.ldlt.solve(r);
      return x;
    }
  }
  Vector x = conjugate_gradient(f.system, b);
  if (!acceptable(x)) throw SolverError("implicit stage: residual check failed");
  return x;
}

Vector solve_implicit_stage(const SparseMatrix& implicit_matrix, const Vector& norm, double tau,
                            const Vector& rhs) {
  ImplicitStageSolver solver(implicit_matrix, norm);
  return solver.solve(tau, rhs);
}

// ---------------------------------------------------------------------------

ImexStepper::ImexStepper(ImexTableau tableau, const ImexSplitProblem& problem)
    : tableau_(std::move(tableau)),
      problem_(problem),
      solver_(problem.implicit_matrix, problem.norm),
      stage_(tableau_.stages()),
      explicit_eval_(tableau_.stages()),
      implicit_eval_(tableau_.stages()) {}

Vector ImexStepper::step(const Vector& u, double t, double dt) {
  const int s = tableau_.stages();
  const DenseMatrix& a1 = tableau_.a_explicit;
  const DenseMatrix& a2 = tableau_.a_implicit;
  const Vector& b1 = tableau_.b_explicit;
  const Vector& b2 = tableau_.b_implicit;

  const bool last_row_is_result =
      a1.row(s - 1).transpose() == b1 && a2.row(s - 1).transpose() == b2;

  auto needs_explicit = [&](int j) {
    if (!last_row_is_result && b1[j] != 0.0) return true;
    for (int i = j + 1; i < s; ++i) {
      if (a1(i, j) != 0.0) return true;
    }
    return false;
  };
  auto needs_implicit = [&](int j) {
    if (!last_row_is_result && b2[j] != 0.0) return true;
    for (int i = j + 1; i < s; ++i) {
      if (a2(i, j) != 0.0) return true;
    }
    return false;
  };

  for (int i = 0; i < s; ++i) {
    if (i == 0) {
      stage_[0] = u;
    } else {
      Vector rhs = u;
      for (int j = 0; j < i; ++j) {
        if (a1(i, j) != 0.0) rhs += (dt * a1(i, j)) * explicit_eval_[j];
        if (a2(i, j) != 0.0) rhs += (dt * a2(i, j)) * implicit_eval_[j];
      }
      const double diag = a2(i, i);
      stage_[i] = diag != 0.0 ? solver_.solve(dt * diag, rhs) : rhs;
    }
    if (needs_explicit(i)) {
      explicit_eval_[i].resize(u.size());
      problem_.explicit_rhs(t + tableau_.c[i] * dt, stage_[i], explicit_eval_[i]);
    }
    if (needs_implicit(i)) implicit_eval_[i] = problem_.implicit_matrix * stage_[i];
  }

  if (last_row_is_result) return stage_[s - 1];

  Vector next = u;
  for (int j = 0; j < s; ++j) {
    if (b1[j] != 0.0) next += (dt * b1[j]) * explicit_eval_[j];
    if (b2[j] != 0.0) next += (dt * b2[j]) * implicit_eval_[j];
  }
  return next;
}

Vector step(const ImexTableau& tableau, const ImexSplitProblem& problem, const Vector& u,
            double t, double dt) {
  ImexStepper stepper(tableau, problem);
  return stepper.step(u, t, dt);
}

std::string EnergyTrace::to_csv() const {
  std::ostringstream os;
  os << "step,t,energy\n" << std::scientific << std::setprecision(12);
  for (std::size_t k = 0; k < step.size(); ++k) {
    os << step[k] << ',' << time[k] << ',' << energy[k] << '\n';
  }
  return os.str();
}

StepPlan plan_steps(double dt, double horizon) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("integrate: horizon must be positive");
  const double ratio = horizon / dt;
  int steps = static_cast<int>(std::ceil(ratio - 1e-9));
  if (steps < 1) steps = 1;
  const double last = horizon - (steps - 1) * dt;
  return {steps, last};
}

IntegrationResult integrate(const ImexTableau& tableau, const ImexSplitProblem& problem,
                            const Vector& u0, double dt, double horizon,
                            const StepObserver& observer) {
  const StepPlan plan = plan_steps(dt, horizon);
  ImexStepper stepper(tableau, problem);
  IntegrationResult result;
  result.state = u0;
  result.trace.push(0, 0.0, problem.energy(u0));
  for (int n = 0; n < plan.steps; ++n) {
    const double t = n * dt;
    const double h = n + 1 == plan.steps ? plan.last_dt : dt;
    result.state = stepper.step(result.state, t, h);
    result.time = n + 1 == plan.steps ? horizon : (n + 1) * dt;
    result.steps = n + 1;
    const double e = problem.energy(result.state);
    result.trace.push(n + 1, result.time, e);
    if (observer && !observer(n + 1, result.time, e, result.state)) {
      result.stopped_early = n + 1 < plan.steps;
      break;
    }
  }
  return result;
}

}  // namespace gsbp
