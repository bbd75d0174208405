#pragma once

#include <vector>

#include "hhgwm/types.hpp"

namespace hhgwm {

struct QuadratureRule {
  std::vector<real> nodes;
  std::vector<real> weights;
};

/// Gauss–Hermite rule for ∫ e^{-x²} f(x) dx via Golub–Welsch.
QuadratureRule gauss_hermite(int n);

/// Nodes and probability weights (summing to one) for an average over
/// N(mean, variance). Zero variance collapses to a single node.
QuadratureRule gaussian_average(real mean, real variance, int n);

}  // namespace hhgwm
