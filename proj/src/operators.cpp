#include "gsbp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace gsbp {

namespace {

void check_theta(double theta, const char* who) {
  if (!(theta >= -0.5 && theta <= 0.5)) {
    std::ostringstream msg;
    msg << who << ": theta = " << theta << " outside [-1/2, 1/2]";
    throw std::invalid_argument(msg.str());
  }
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

void add_block(std::vector<Eigen::Triplet<double>>& triplets, int row0, int col0,
               const DenseMatrix& block, double scale) {
  for (int r = 0; r < block.rows(); ++r) {
    for (int c = 0; c < block.cols(); ++c) {
      if (block(r, c) != 0.0) triplets.emplace_back(row0 + r, col0 + c, scale * block(r, c));
    }
  }
}

// Flux contribution of a cell's right face to its own rows and of its left
// face, each split as in the theta-flux (1/2 + theta) u^- + (1/2 - theta) u^+.
struct FaceTerms {
  DenseMatrix right_self;  // -(1/2 - theta) M^-1 L(1) L(1)^T
  DenseMatrix left_self;   // +(1/2 + theta) M^-1 L(-1) L(-1)^T
};

FaceTerms face_terms(const ReferenceElement& elem, double theta) {
  const Vector inv_w = elem.weights().cwiseInverse();
  const Vector& l = elem.left();
  const Vector& r = elem.right();
  return {-(0.5 - theta) * inv_w.asDiagonal() * (r * r.transpose()),
          (0.5 + theta) * inv_w.asDiagonal() * (l * l.transpose())};
}

}  // namespace

std::string to_string(Topology topology) {
  return topology == Topology::periodic ? "periodic" : "bounded";
}

Topology topology_from_string(const std::string& name) {
  if (name == "periodic") return Topology::periodic;
  if (name == "bounded") return Topology::bounded;
  throw std::invalid_argument("unknown topology '" + name + "'");
}

LocalBlocks local_blocks(const ReferenceElement& elem, double theta) {
  const Vector inv_w = elem.weights().cwiseInverse();
  const Vector& l = elem.left();
  const Vector& r = elem.right();
  const FaceTerms faces = face_terms(elem, theta);
  LocalBlocks blocks;
  blocks.interior = elem.diff() + faces.right_self + faces.left_self;
  blocks.upper = (0.5 - theta) * inv_w.asDiagonal() * (r * l.transpose());
  blocks.lower = -(0.5 + theta) * inv_w.asDiagonal() * (l * r.transpose());
  blocks.left_boundary = elem.diff() + faces.right_self;
  blocks.right_boundary = elem.diff() + faces.left_self;
  return blocks;
}

SparseMatrix assemble_d_minus(const ReferenceElement& elem, const Mesh1D& mesh, double theta,
                              Topology topology) {
  check_theta(theta, "assemble_d_minus");
  const int np = elem.num_nodes();
  const int k_cells = mesh.num_cells();
  const int n = k_cells * np;
  const LocalBlocks blocks = local_blocks(elem, theta);
  const FaceTerms faces = face_terms(elem, theta);
  const bool periodic = topology == Topology::periodic;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(k_cells) * (np * np + 2 * np));
  for (int i = 0; i < k_cells; ++i) {
    const double scale = 2.0 / mesh.width(i);
    const bool has_left = periodic || i > 0;
    const bool has_right = periodic || i + 1 < k_cells;

    DenseMatrix diag = elem.diff();
    if (has_right) diag += faces.right_self;
    if (has_left) diag += faces.left_self;
    add_block(triplets, i * np, i * np, diag, scale);

    if (has_right) add_block(triplets, i * np, ((i + 1) % k_cells) * np, blocks.upper, scale);
    if (has_left) {
      add_block(triplets, i * np, ((i - 1 + k_cells) % k_cells) * np, blocks.lower, scale);
    }
  }
  SparseMatrix d(n, n);
  d.setFromTriplets(triplets.begin(), triplets.end());
  d.prune(0.0);
  d.makeCompressed();
  return d;
}

GlobalOperatorSet::GlobalOperatorSet(const ReferenceElement& elem, const Mesh1D& mesh,
                                     double theta, Topology topology)
    : theta_(theta),
      topology_(topology),
      degree_(elem.degree()),
      num_cells_(mesh.num_cells()),
      x_a_(mesh.x_a()),
      x_b_(mesh.x_b()) {
  check_theta(theta, "assemble_first_derivative");
  const int np = elem.num_nodes();
  const int n = num_cells_ * np;

  nodes_ = physical_nodes(mesh, elem);
  norm_.resize(n);
  for (int i = 0; i < num_cells_; ++i) {
    norm_.segment(i * np, np) = 0.5 * mesh.width(i) * elem.weights();
  }

  d_minus_ = assemble_d_minus(elem, mesh, theta, topology);
  d_plus_ = assemble_d_minus(elem, mesh, -theta, topology);

  boundary_.resize(n, n);
  if (topology_ == Topology::bounded) {
    t_alpha_ = Vector::Zero(n);
    t_beta_ = Vector::Zero(n);
    t_alpha_.head(np) = elem.left();
    t_beta_.tail(np) = elem.right();
    std::vector<Eigen::Triplet<double>> triplets;
    const DenseMatrix bl = -elem.left() * elem.left().transpose();
    const DenseMatrix br = elem.right() * elem.right().transpose();
    add_block(triplets, 0, 0, bl, 1.0);
    add_block(triplets, n - np, n - np, br, 1.0);
    boundary_.setFromTriplets(triplets.begin(), triplets.end());
  }
  boundary_.makeCompressed();

  const SparseMatrix difference = d_plus_ - d_minus_;
  SparseMatrix c = norm_.asDiagonal() * difference;
  c *= 0.5;
  c.prune(0.0);
  c.makeCompressed();
  dissipation_ = std::move(c);
}

SparseMatrix GlobalOperatorSet::norm_matrix() const {
  SparseMatrix m(size(), size());
  std::vector<Eigen::Triplet<double>> triplets;
  for (int j = 0; j < size(); ++j) triplets.emplace_back(j, j, norm_[j]);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix GlobalOperatorSet::q_minus() const {
  SparseMatrix q = norm_.asDiagonal() * d_minus_;
  return q - 0.5 * boundary_;
}

SparseMatrix GlobalOperatorSet::q_plus() const {
  SparseMatrix q = norm_.asDiagonal() * d_plus_;
  return q - 0.5 * boundary_;
}

double GlobalOperatorSet::inner(const Vector& u, const Vector& v) const {
  return u.dot(norm_.cwiseProduct(v));
}

GlobalOperatorSet assemble_first_derivative(const ReferenceElement& elem, const Mesh1D& mesh,
                                            double theta, Topology topology) {
  return GlobalOperatorSet(elem, mesh, theta, topology);
}

SparseMatrix dissipation_matrix(const GlobalOperatorSet& ops) { return ops.dissipation(); }

std::string to_string(DiffusionFlux flux) {
  switch (flux) {
    case DiffusionFlux::br1: return "BR1";
    case DiffusionFlux::ldg_a: return "LDG_a";
    case DiffusionFlux::ldg_b: return "LDG_b";
    case DiffusionFlux::general: return "general";
  }
  return "general";
}

DiffusionFlux classify_diffusion_flux(double theta_diff) {
  if (theta_diff == 0.0) return DiffusionFlux::br1;
  if (theta_diff == 0.5) return DiffusionFlux::ldg_a;
  if (theta_diff == -0.5) return DiffusionFlux::ldg_b;
  return DiffusionFlux::general;
}

SecondDerivativeOperator second_derivative(const ReferenceElement& elem, const Mesh1D& mesh,
                                           double theta_diff, Topology topology) {
  GlobalOperatorSet first(elem, mesh, theta_diff, topology);
  SparseMatrix d2 = first.d_minus() * first.d_plus();
  d2.prune(0.0);
  d2.makeCompressed();
  return {theta_diff, classify_diffusion_flux(theta_diff), std::move(d2), std::move(first)};
}

double max_eigenvalue_symmetric(const SparseMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> active;
  std::vector<int> position(n, -1);
  for (int r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.value() != 0.0) {
        if (position[r] < 0) {
          position[r] = static_cast<int>(active.size());
          active.push_back(r);
        }
        if (position[it.col()] < 0) {
          position[it.col()] = static_cast<int>(active.size());
          active.push_back(static_cast<int>(it.col()));
        }
      }
    }
  }
  if (active.empty()) return 0.0;
  const int m = static_cast<int>(active.size());
  DenseMatrix sub = DenseMatrix::Zero(m, m);
  for (int r : active) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      sub(position[r], position[it.col()]) = it.value();
    }
  }
  sub = 0.5 * (sub + sub.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(sub, Eigen::EigenvaluesOnly);
  double top = solver.eigenvalues().maxCoeff();
  if (m < n) top = std::max(top, 0.0);
  return top;
}

CertificationReport verify_axioms(const GlobalOperatorSet& ops, double tolerance) {
  CertificationReport report;
  report.degree = ops.degree();
  report.num_cells = ops.num_cells();
  report.theta = ops.theta();
  report.topology = ops.topology();
  report.tolerance = tolerance;

  const Vector& x = ops.nodes();
  const int n_deg = ops.degree();

  if (ops.topology() == Topology::bounded) {
    double acc = 0.0;
    double bnd = 0.0;
    for (int k = 0; k <= n_deg; ++k) {
      const Vector xk = x.array().pow(k);
      const Vector dxk = k == 0 ? Vector::Zero(x.size()) : Vector(k * x.array().pow(k - 1));
      const double scale = std::max(1.0, xk.cwiseAbs().maxCoeff());
      acc = std::max(acc, (ops.d_minus() * xk - dxk).cwiseAbs().maxCoeff() / scale);
      acc = std::max(acc, (ops.d_plus() * xk - dxk).cwiseAbs().maxCoeff() / scale);

      const double a_k = std::pow(ops.x_a(), k);
      const double b_k = std::pow(ops.x_b(), k);
      bnd = std::max(bnd, std::abs(ops.t_alpha().dot(xk) - a_k) / std::max(1.0, std::abs(a_k)));
      bnd = std::max(bnd, std::abs(ops.t_beta().dot(xk) - b_k) / std::max(1.0, std::abs(b_k)));
    }
    report.accuracy_residual = acc;
    report.boundary_residual = bnd;
  }

  report.norm_min = ops.norm_diagonal().minCoeff();

  const SparseMatrix q_minus = ops.q_minus();
  SparseMatrix q_minus_t = q_minus.transpose();
  report.sbp_residual = max_abs(SparseMatrix(ops.q_plus() + q_minus_t));

  const SparseMatrix& c = ops.dissipation();
  SparseMatrix c_t = c.transpose();
  report.dissipation_asymmetry = max_abs(SparseMatrix(c - c_t));
  report.dissipation_max_eigenvalue = max_eigenvalue_symmetric(c);

  if (ops.topology() == Topology::periodic) {
    const SparseMatrix d2 = ops.d_minus() * ops.d_plus();
    const SparseMatrix md2 = ops.norm_diagonal().asDiagonal() * d2;
    SparseMatrix dpt = ops.d_plus().transpose();
    const SparseMatrix mdp = ops.norm_diagonal().asDiagonal() * ops.d_plus();
    const SparseMatrix energy = dpt * mdp;
    report.second_derivative_residual = max_abs(SparseMatrix(md2 + energy));
  }
  return report;
}

bool CertificationReport::accuracy_passed() const {
  return !accuracy_residual || *accuracy_residual <= tolerance;
}

bool CertificationReport::norm_passed() const {
  return norm_min > 0.0 && (!boundary_residual || *boundary_residual <= tolerance);
}

bool CertificationReport::sbp_passed() const { return sbp_residual <= tolerance; }

bool CertificationReport::dissipation_passed() const {
  return dissipation_max_eigenvalue <= tolerance && dissipation_asymmetry <= tolerance;
}

bool CertificationReport::second_derivative_passed() const {
  return !second_derivative_residual || *second_derivative_residual <= tolerance;
}

bool CertificationReport::all_passed() const {
  return accuracy_passed() && norm_passed() && sbp_passed() && dissipation_passed() &&
         second_derivative_passed();
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(6) << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace

std::string CertificationReport::to_text() const {
  std::ostringstream os;
  os << "degree: " << degree << '\n'
     << "cells: " << num_cells << '\n'
     << "theta: " << theta << '\n'
     << "topology: " << to_string(topology) << '\n'
     << "tolerance: " << fmt(tolerance) << '\n'
     << "accuracy_residual: " << fmt(accuracy_residual) << '\n'
     << "norm_min: " << fmt(norm_min) << '\n'
     << "boundary_residual: " << fmt(boundary_residual) << '\n'
     << "sbp_residual: " << fmt(sbp_residual) << '\n'
     << "dissipation_max_eigenvalue: " << fmt(dissipation_max_eigenvalue) << '\n'
     << "dissipation_asymmetry: " << fmt(dissipation_asymmetry) << '\n'
     << "second_derivative_residual: " << fmt(second_derivative_residual) << '\n'
     << "axiom_accuracy: " << verdict(accuracy_passed()) << '\n'
     << "axiom_norm_boundary: " << verdict(norm_passed()) << '\n'
     << "axiom_sbp: " << verdict(sbp_passed()) << '\n'
     << "axiom_dissipation: " << verdict(dissipation_passed()) << '\n'
     << "second_derivative_identity: " << verdict(second_derivative_passed()) << '\n'
     << "all: " << verdict(all_passed()) << '\n';
  return os.str();
}

std::string CertificationReport::csv_header() {
  return "N,K,theta,topology,accuracy_residual,boundary_residual,norm_min,sbp_residual,"
         "dissipation_max_eigenvalue,second_derivative_residual,accuracy,norm_boundary,sbp,"
         "dissipation,second_derivative,all";
}

std::string CertificationReport::csv_row() const {
  std::ostringstream os;
  os << degree << ',' << num_cells << ',' << theta << ',' << to_string(topology) << ','
     << fmt(accuracy_residual) << ',' << fmt(boundary_residual) << ',' << fmt(norm_min) << ','
     << fmt(sbp_residual) << ',' << fmt(dissipation_max_eigenvalue) << ','
     << fmt(second_derivative_residual) << ',' << verdict(accuracy_passed()) << ','
     << verdict(norm_passed()) << ',' << verdict(sbp_passed()) << ','
     << verdict(dissipation_passed()) << ',' << verdict(second_derivative_passed()) << ','
     << verdict(all_passed());
  return os.str();
}

SparseMatrix sat_advection_rhs(const GlobalOperatorSet& ops, double a, double sigma) {
  if (ops.topology() != Topology::bounded) {
    throw std::invalid_argument("sat_advection_rhs: requires bounded topology");
  }
  if (!(a > 0.0)) throw std::invalid_argument("sat_advection_rhs: requires a > 0");
  const Vector& t_alpha = ops.t_alpha();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int r = 0; r < ops.size(); ++r) {
    if (t_alpha[r] == 0.0) continue;
    for (int c = 0; c < ops.size(); ++c) {
      if (t_alpha[c] == 0.0) continue;
      triplets.emplace_back(r, c, sigma * t_alpha[r] * t_alpha[c] / ops.norm_diagonal()[r]);
    }
  }
  SparseMatrix penalty(ops.size(), ops.size());
  penalty.setFromTriplets(triplets.begin(), triplets.end());
  SparseMatrix rhs = -a * ops.d_minus() + penalty;
  rhs.makeCompressed();
  return rhs;
}

DenseMatrix sat_energy_form(const GlobalOperatorSet& ops, const SparseMatrix& rhs, double a) {
  const DenseMatrix r = DenseMatrix(rhs);
  const auto m = ops.norm_diagonal().asDiagonal();
  DenseMatrix form = m * r + r.transpose() * m;
  form += a * ops.t_beta() * ops.t_beta().transpose();
  return form;
}

}  // namespace gsbp
