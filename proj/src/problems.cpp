#include "gsbp/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gsbp {

void AdvDiffConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("AdvDiffConfig: " + what); };
  if (!(a > 0.0)) fail("a must be positive");
  if (!(c > 0.0)) fail("c must be positive");
  if (!(theta_adv >= -0.5 && theta_adv <= 0.5)) fail("theta_adv outside [-1/2, 1/2]");
  if (!(theta_diff >= -0.5 && theta_diff <= 0.5)) fail("theta_diff outside [-1/2, 1/2]");
  if (degree < kMinDegree || degree > kMaxDegree) fail("degree outside [1, 16]");
  if (num_cells < 2) fail("at least two cells required");
  if (!(x_a < x_b)) fail("require x_a < x_b");
}

std::string to_string(SolutionKind kind) { return kind == SolutionKind::decay ? "decay" : "growth"; }

SolutionKind solution_kind_from_string(const std::string& name) {
  if (name == "decay") return SolutionKind::decay;
  if (name == "growth") return SolutionKind::growth;
  throw std::invalid_argument("unknown problem '" + name + "' (expected decay or growth)");
}

ManufacturedSolution::ManufacturedSolution(SolutionKind kind, double a, double c)
    : kind_(kind), a_(a), c_(c) {}

double ManufacturedSolution::value(double x, double t) const {
  if (kind_ == SolutionKind::decay) return std::exp(-c_ * t) * std::sin(x - a_ * t);
  return std::exp(c_ * t) * std::sin(x);
}

double ManufacturedSolution::dt(double x, double t) const {
  if (kind_ == SolutionKind::decay) {
    return -c_ * value(x, t) - a_ * std::exp(-c_ * t) * std::cos(x - a_ * t);
  }
  return c_ * value(x, t);
}

double ManufacturedSolution::dx(double x, double t) const {
  if (kind_ == SolutionKind::decay) return std::exp(-c_ * t) * std::cos(x - a_ * t);
  return std::exp(c_ * t) * std::cos(x);
}

double ManufacturedSolution::dxx(double x, double t) const { return -value(x, t); }

double ManufacturedSolution::source(double x, double t) const {
  if (kind_ == SolutionKind::decay) return 0.0;
  return std::exp(c_ * t) * (2.0 * c_ * std::sin(x) + a_ * std::cos(x));
}

double ManufacturedSolution::residual(double x, double t) const {
  return dt(x, t) + a_ * dx(x, t) - c_ * dxx(x, t) - source(x, t);
}

std::unique_ptr<AdvDiffDiscretization> semidiscretize(const AdvDiffConfig& config,
                                                      const ManufacturedSolution* source) {
  config.validate();
  ReferenceElement elem = build_lgl(config.degree);
  Mesh1D mesh = uniform_mesh(config.x_a, config.x_b, config.num_cells);
  GlobalOperatorSet advection(elem, mesh, config.theta_adv, Topology::periodic);
  SecondDerivativeOperator diffusion =
      second_derivative(elem, mesh, config.theta_diff, Topology::periodic);

  auto disc = std::unique_ptr<AdvDiffDiscretization>(new AdvDiffDiscretization{
      config, std::move(elem), std::move(mesh), std::move(advection), std::move(diffusion), {}});

  ImexSplitProblem& p = disc->problem;
  p.dim = disc->advection.size();
  p.norm = disc->advection.norm_diagonal();
  p.implicit_matrix = config.c * disc->diffusion.d2;

  const AdvDiffDiscretization* self = disc.get();
  const double a = config.a;
  if (source != nullptr && source->has_source()) {
    const ManufacturedSolution g = *source;
    p.explicit_rhs = [self, a, g](double t, const Vector& u, Vector& out) {
      out.noalias() = -a * (self->advection.d_minus() * u);
      const Vector& x = self->advection.nodes();
      for (Eigen::Index j = 0; j < x.size(); ++j) out[j] += g.source(x[j], t);
    };
  } else {
    p.explicit_rhs = [self, a](double, const Vector& u, Vector& out) {
      out.noalias() = -a * (self->advection.d_minus() * u);
    };
  }
  return disc;
}

Vector sample(const ManufacturedSolution& solution, const Vector& nodes, double t) {
  Vector u(nodes.size());
  for (Eigen::Index j = 0; j < nodes.size(); ++j) u[j] = solution.value(nodes[j], t);
  return u;
}

Vector initial_condition(const ManufacturedSolution& solution, const Mesh1D& mesh,
                         const ReferenceElement& elem, double t) {
  return sample(solution, physical_nodes(mesh, elem), t);
}

double l2_error(const Vector& state, const ManufacturedSolution& solution, double t,
                const Vector& nodes, const Vector& norm) {
  if (state.size() != nodes.size() || norm.size() != nodes.size()) {
    throw std::invalid_argument("l2_error: size mismatch");
  }
  const Vector e = state - sample(solution, nodes, t);
  return std::sqrt(e.dot(norm.cwiseProduct(e)));
}

std::unique_ptr<BurgersDiscretization> burgers_rhs(const ReferenceElement& elem,
                                                   const Mesh1D& mesh, double theta_adv,
                                                   double theta_diff, double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("burgers_rhs: c must be non-negative");
  GlobalOperatorSet advection(elem, mesh, theta_adv, Topology::periodic);
  SecondDerivativeOperator diffusion = second_derivative(elem, mesh, theta_diff, Topology::periodic);
  SparseMatrix central = 0.5 * (advection.d_plus() + advection.d_minus());
  SparseMatrix dissipation = 0.5 * (advection.d_plus() - advection.d_minus());
  central.prune(0.0);
  dissipation.prune(0.0);

  auto disc = std::unique_ptr<BurgersDiscretization>(new BurgersDiscretization{
      elem, mesh, std::move(advection), std::move(diffusion), std::move(central),
      std::move(dissipation), c, {}});

  ImexSplitProblem& p = disc->problem;
  p.dim = disc->advection.size();
  p.norm = disc->advection.norm_diagonal();
  p.implicit_matrix = c * disc->diffusion.d2;
  const BurgersDiscretization* self = disc.get();
  p.explicit_rhs = [self](double, const Vector& u, Vector& out) {
    const Vector flux = 0.5 * u.cwiseProduct(u);
    const double sup = u.cwiseAbs().maxCoeff();
    out.noalias() = -(self->central * flux);
    out.noalias() += sup * (self->dissipation * u);
  };
  return disc;
}

}  // namespace gsbp
