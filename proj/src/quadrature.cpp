#include "hhgwm/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include "hhgwm/errors.hpp"

namespace hhgwm {

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw ConfigError("invalid nodes: must satisfy >= 1");
  // Jacobi matrix of the physicists' Hermite recurrence
  mat J = mat::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<mat> es(J);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const real v0 = es.eigenvectors()(0, k);
    r.nodes[k] = es.eigenvalues()[k];
    r.weights[k] = std::sqrt(pi) * v0 * v0;
  }
  return r;
}

QuadratureRule gaussian_average(real mean, real variance, int n) {
  if (variance <= 0.0 || n == 1) return {{mean}, {1.0}};
  auto r = gauss_hermite(n);
  const real scale = std::sqrt(2.0 * variance);
  real total = 0.0;
  for (real w : r.weights) total += w;
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = mean + scale * r.nodes[k];
    r.weights[k] /= total;
  }
  return r;
}

}  // namespace hhgwm
