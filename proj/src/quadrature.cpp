#include "spinglass/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace spinglass {

QuadratureRule gauss_hermite(int order) {
  if (order < 2) throw std::invalid_argument("gauss_hermite: order must be >= 2");

  // Golub-Welsch on the Jacobi matrix of the Hermite polynomials
  // (weight exp(-x^2)); off-diagonal entries sqrt(j/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int j = 1; j < order; ++j) {
    const double b = std::sqrt(0.5 * j);
    jacobi(j, j - 1) = b;
    jacobi(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigensolve failed");

  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double sqrt2 = std::sqrt(2.0);
  for (int i = 0; i < order; ++i) {
    // physicists' rule -> N(0,1): node *= sqrt(2), weight /= sqrt(pi);
    // the first eigenvector component squared already carries sqrt(pi).
    rule.nodes[i] = sqrt2 * es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  // enforce exact symmetry of the nodes about 0
  for (int i = 0, j = order - 1; i < j; ++i, --j) {
    const double mag = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -mag;
    rule.nodes[j] = mag;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  for (double& w : rule.weights) w /= wsum;
  return rule;
}

const QuadratureRule& default_quadrature() {
  static const QuadratureRule rule = gauss_hermite(61);
  return rule;
}

const QuadratureRule& tanh_quadrature() {
  static const QuadratureRule rule = gauss_hermite(501);
  return rule;
}

}  // namespace spinglass
