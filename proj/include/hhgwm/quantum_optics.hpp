#pragma once

#include <vector>

#include "hhgwm/spectrum.hpp"

namespace hhgwm {

struct CoherentNode {
  real weight;
  cplx chi;
  real eps;  // squeezing-axis amplitude of the driver node
};

/// State of one harmonic mode as a Gaussian-weighted mixture of coherent
/// states |χ_k⟩.
struct HarmonicEnsemble {
  real q = 0.0;
  real kappa = 0.0;
  std::vector<CoherentNode> nodes;
  real phi = 0.0;
  real I_squ = 0.0;
  SqueezeAxis axis = SqueezeAxis::x;
};

/// Throws ConfigError unless weights are non-negative and sum to one.
void validate(const HarmonicEnsemble& ens);

/// χ_k = κ √q d_k(qω), with d_k(qω) = ∫ dt w(t) d(t) e^{iqωt} for driver
/// node k, read off the node's spectrum table.
HarmonicEnsemble build_ensemble(const FieldConfig& cfg, const AtomConfig& atom, const SqueezeConfig& squeeze,
                                const Numerics& num, real q, real kappa, NodeCache& cache, int threads = 1);

/// Same, from node spectra that are already available.
HarmonicEnsemble ensemble_from_nodes(const std::vector<SqueezedNode>& nodes, const FieldConfig& cfg,
                                     const SqueezeConfig& squeeze, real q, real kappa);

/// Square lattice of phase-space points γ = x + iy.
struct PhaseSpaceGrid {
  real x0, x1, y0, y1;
  int nx = 201, ny = 201;

  real dx() const { return (x1 - x0) / (nx - 1); }
  real dy() const { return (y1 - y0) / (ny - 1); }
  real x(int i) const { return x0 + i * dx(); }
  real y(int j) const { return y0 + j * dy(); }
};

/// All nodes except the outermost ones (by distance from the mean) whose
/// combined weight is below 1e-6; those are left out of W.
std::vector<bool> covered_nodes(const HarmonicEnsemble& ens);

/// Square grid around the ensemble mean, half-width max(2, cloud radius + 4).
/// `points` per side, raised if needed to keep the spacing at most 0.5.
PhaseSpaceGrid default_grid(const HarmonicEnsemble& ens, int points = 201);

/// W(γ) = Σ_k w_k (2/π) e^{-2|γ-χ_k|²} over the covered nodes, rows along y,
/// columns along x. Values below 1e-30 are flushed to zero. Throws
/// GridTooSmall when a covered node is within four coherent widths of the
/// boundary. `normalize` scales the maximum to one.
mat wigner(const HarmonicEnsemble& ens, const PhaseSpaceGrid& grid, bool normalize = false);

struct QOObservables {
  real var_min = 0.5;
  real var_max = 0.5;
  real theta_min = 0.0;
  real theta_max = 0.0;
  real g2 = 1.0;
  real mean_photons = 0.0;
};

/// Variance of X_θ = (b e^{-iθ} + b† e^{iθ})/√2 over the mixture, at its
/// extremal angles.
QOObservables quadrature_variances(const HarmonicEnsemble& ens);

/// Σw|χ|⁴ / (Σw|χ|²)². Throws ZeroIntensity when the mean photon number
/// is below `guard`.
real g2_zero(const HarmonicEnsemble& ens, real guard = 1e-300);

/// Variances, g2 and mean photon number together.
QOObservables observables(const HarmonicEnsemble& ens);

struct ObservableRow {
  real q;
  real phi;
  QOObservables obs;
  bool ok = true;
};

/// Every (q, φ) pair; node spectra are shared across q for a given φ.
std::vector<ObservableRow> observables_sweep(const FieldConfig& cfg, const AtomConfig& atom,
                                             const SqueezeConfig& squeeze, const Numerics& num,
                                             const std::vector<real>& qs, const std::vector<real>& phis,
                                             real kappa, int threads = 1);

}  // namespace hhgwm
