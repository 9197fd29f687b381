#include "gsbp/reference_element.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gsbp {

LegendreValue legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  // P_n' from (x^2 - 1) P_n' = n (x P_n - P_{n-1}); at the endpoints use
  // the closed form P_n'(+-1) = (+-1)^(n+1) n (n+1) / 2.
  double dp;
  if (std::abs(x * x - 1.0) < 1e-300) {
    dp = 0.5 * n * (n + 1.0) * ((x > 0 || n % 2 == 1) ? 1.0 : -1.0);
  } else {
    dp = n * (x * p - p_prev) / (x * x - 1.0);
  }
  return {p, dp};
}

ReferenceElement::ReferenceElement(int degree, Vector nodes, Vector weights)
    : degree_(degree), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  const int n = num_nodes();
  if (nodes_.size() != n || weights_.size() != n) {
    throw std::invalid_argument("ReferenceElement: node/weight count must be degree + 1");
  }
  for (int j = 1; j < n; ++j) {
    if (!(nodes_[j] > nodes_[j - 1])) {
      throw std::invalid_argument("ReferenceElement: nodes must be strictly increasing");
    }
  }

  bary_.resize(n);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k != j) prod *= nodes_[j] - nodes_[k];
    }
    bary_[j] = 1.0 / prod;
  }

  // Barycentric differentiation; diagonal by the negative-sum trick so that
  // rows annihilate constants to roundoff.
  diff_ = DenseMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double row_sum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      diff_(j, k) = (bary_[k] / bary_[j]) / (nodes_[j] - nodes_[k]);
      row_sum += diff_(j, k);
    }
    diff_(j, j) = -row_sum;
  }

  left_ = lagrange_at(-1.0);
  right_ = lagrange_at(1.0);
}

Vector ReferenceElement::lagrange_at(double x) const {
  const int n = num_nodes();
  Vector values = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (x == nodes_[j]) {
      values[j] = 1.0;
      return values;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    values[j] = bary_[j] / (x - nodes_[j]);
    denom += values[j];
  }
  return values / denom;
}

ReferenceElement build_lgl(int degree) {
  if (degree < kMinDegree || degree > kMaxDegree) {
    throw std::invalid_argument("build_lgl: degree " + std::to_string(degree) +
                                " outside [1, 16]");
  }
  const int n = degree + 1;
  Vector nodes(n);
  Vector weights(n);
  nodes[0] = -1.0;
  nodes[degree] = 1.0;

  // Interior nodes are the roots of (1 - x^2) P_N'(x). Its derivative is
  // -N(N+1) P_N(x) by the Legendre equation, which gives a compact Newton step.
  const double nn1 = degree * (degree + 1.0);
  for (int j = 1; j < degree; ++j) {
    double x = -std::cos(std::numbers::pi * j / degree);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(degree, x);
      const double dx = (1.0 - x * x) * dp / (nn1 * p);
      x += dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    nodes[j] = x;
  }
  // Enforce exact symmetry about 0.
  for (int j = 0; j < n / 2; ++j) {
    const double half = 0.5 * (nodes[n - 1 - j] - nodes[j]);
    nodes[j] = -half;
    nodes[n - 1 - j] = half;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;

  for (int j = 0; j < n; ++j) {
    const double p = legendre(degree, nodes[j]).p;
    weights[j] = 2.0 / (nn1 * p * p);
  }
  for (int j = 0; j < n / 2; ++j) {
    const double w = 0.5 * (weights[j] + weights[n - 1 - j]);
    weights[j] = w;
    weights[n - 1 - j] = w;
  }
  return ReferenceElement(degree, std::move(nodes), std::move(weights));
}

DenseMatrix diff_matrix(const ReferenceElement& elem) { return elem.diff(); }

BoundaryVectors boundary_vectors(const ReferenceElement& elem) {
  return {elem.left(), elem.right()};
}

}  // namespace gsbp
