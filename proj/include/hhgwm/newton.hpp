#pragma once

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "hhgwm/errors.hpp"
#include "hhgwm/types.hpp"

namespace hhgwm {

template <class Scalar, int N>
struct NewtonResult {
  vector<Scalar, N> z;
  real residual = std::numeric_limits<real>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Central-difference Jacobian of an analytic vector field. Steps are scaled
/// per coordinate; for holomorphic maps a real step suffices.
template <class F, class Scalar, int N>
matrix<Scalar, N, N> jacobian(const F& f, const vector<Scalar, N>& z) {
  const Eigen::Index n = z.size();
  matrix<Scalar, N, N> J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const real h = 6e-6 * std::max<real>(1.0, std::abs(z[j]));
    vector<Scalar, N> zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    J.col(j) = (f(zp) - f(zm)) / (2.0 * h);
  }
  return J;
}

/// Damped Newton with step halving. `f` may throw Error (e.g. near a pole);
/// such trial points are treated as rejected steps.
template <class F, class Scalar, int N>
NewtonResult<Scalar, N> damped_newton(const F& f, vector<Scalar, N> z, real tol, int max_iterations) {
  auto norm_at = [&](const vector<Scalar, N>& x, vector<Scalar, N>& fx) {
    try {
      fx = f(x);
    } catch (const Error&) {
      return std::numeric_limits<real>::infinity();
    }
    const real r = fx.cwiseAbs().maxCoeff();
    return std::isfinite(r) ? r : std::numeric_limits<real>::infinity();
  };

  NewtonResult<Scalar, N> out;
  vector<Scalar, N> fz;
  real r = norm_at(z, fz);
  if (!std::isfinite(r)) {
    out.z = z;
    return out;
  }
  for (int it = 0; it < max_iterations; ++it) {
    if (r < tol) {
      out.converged = true;
      out.iterations = it;
      break;
    }
    matrix<Scalar, N, N> J;
    try {
      J = jacobian(f, z);
    } catch (const Error&) {
      break;
    }
    Eigen::FullPivLU<matrix<Scalar, N, N>> lu(J);
    if (!lu.isInvertible()) break;
    const vector<Scalar, N> step = lu.solve(fz);

    real lambda = 1.0;
    bool accepted = false;
    vector<Scalar, N> trial, ftrial;
    for (int k = 0; k < 40; ++k, lambda *= 0.5) {
      trial = z - lambda * step;
      const real rt = norm_at(trial, ftrial);
      if (rt < (1.0 - 1e-4 * lambda) * r) {
        z = trial;
        fz = ftrial;
        r = rt;
        accepted = true;
        break;
      }
    }
    out.iterations = it + 1;
    if (!accepted) break;
  }
  if (r < tol) out.converged = true;
  out.z = z;
  out.residual = r;
  return out;
}

}  // namespace hhgwm
