#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hhgwm/config.hpp"
#include "hhgwm/saddle.hpp"

namespace hhgwm {

/// Uniform sampling t_k = k·dt, k < n, over the pulse window.
struct TimeGrid {
  real dt;
  int n;

  real t(int k) const { return k * dt; }
  static TimeGrid for_pulse(const FieldConfig& cfg, int points_per_cycle);
};

struct TimeDipole {
  std::vector<real> t;
  cvec half;   // the explicit term; the dipole is half + c.c.
  cvec d;      // real-valued up to rounding
  int pole_hits = 0;
};

/// Stationary-momentum SFA dipole with the 2ω corrections: σ in the action,
/// the ionization factor through the total field, and the weak-value
/// corrected matrix elements (linear or exponentiated, see Numerics).
TimeDipole time_dipole(const TwoColorField& field, const AtomConfig& atom, const Numerics& num,
                       const TimeGrid& grid, int threads = 1);

struct SpectrumMeta {
  std::string mode;
  real phi = 0.0;
  real epsilon = 0.0;
  real I_squ = 0.0;
  std::string envelope;
  int n_time = 0;
  int n_fft = 0;
  int pole_hits = 0;
  std::vector<real> flagged;  // orders where no physical orbit survived
};

struct SpectrumTable {
  std::vector<real> omega;       // in units of ω
  std::vector<cplx> amplitude;
  std::vector<real> intensity;   // |amplitude|²
  SpectrumMeta meta;

  std::size_t size() const { return omega.size(); }
  /// Index of the sample nearest to frequency q (in units of ω).
  std::size_t index_of(real q) const;
  /// Largest intensity within |ω − q| ≤ half_width.
  real peak(real q, real half_width = 0.25) const;
};

/// Analysis window: ones for sin² pulses; for flat pulses a sin² over whole
/// cycles after the first τ_max, which carry the switch-on transient.
vec spectral_window(const TimeDipole& dipole, const FieldConfig& cfg, const Numerics& num);

/// Zero-padded DFT, X(ω) = Σ d(t) w(t) e^{iωt} dt, on ω ∈ [0, Nyquist].
/// w is 1 for sin² pulses. Flat pulses get a sin² window over [τ_max, end],
/// which drops the switch-on transient.
SpectrumTable hhg_spectrum(const TimeDipole& dipole, const FieldConfig& cfg, const Numerics& num);

/// Σ_k d(t_k) w(t_k) e^{iqωt_k} with no dt, the amplitude that feeds χ_q.
cplx harmonic_sum(const TimeDipole& dipole, const FieldConfig& cfg, const Numerics& num, real q);

/// Convenience: dipole + transform for one deterministic field.
SpectrumTable compute_spectrum(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                               int threads = 1);

/// Saddle-point reconstruction: for every accepted short/long orbit,
///   i E(t₁) d_ion d_rec (2π)^{3/2} det(iH)^{-1/2} (2π/iτ) e^{-iΨ},
/// summed within one cycle and repeated over n_cycles.
SpectrumTable spectrum_saddle(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                              const std::vector<real>& qs, SaddleMode mode);

struct PhaseMap {
  std::vector<real> q_grid;
  std::vector<real> phi_grid;
  mat re_sigma, im_sigma, re_sigma_phi, im_sigma_phi;  // (phi, q)
  std::vector<std::vector<bool>> converged;
};

/// σ and σ + Φ on the short orbit of the first half-cycle. With a resonance
/// Φ is evaluated on the sigma-mode saddles. With a squeezed driver σ + Φ is
/// taken on the four-variable saddles, in the field at the saddle amplitude ε_s.
PhaseMap phase_map(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                   const std::vector<real>& qs, const std::vector<real>& phis, int threads = 1,
                   const std::optional<SqueezeConfig>& squeeze = std::nullopt);

/// Write-once store of per-node spectra keyed by the 2ω quadratures.
class NodeCache {
 public:
  std::shared_ptr<const SpectrumTable> find(cplx x, cplx y) const;
  std::shared_ptr<const SpectrumTable> insert(cplx x, cplx y, SpectrumTable table);
  std::size_t size() const;

 private:
  using Key = std::array<real, 4>;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const SpectrumTable>> store_;
};

struct SqueezedNode {
  real weight;
  cplx eps;  // squeezing-axis quadrature amplitude
  std::shared_ptr<const SpectrumTable> spectrum;
};

/// Node spectra for the Gaussian average over the squeezing-axis amplitude.
std::vector<SqueezedNode> squeezed_nodes(const FieldConfig& cfg, const AtomConfig& atom,
                                         const SqueezeConfig& squeeze, const Numerics& num,
                                         NodeCache& cache, int threads = 1);

/// Gaussian-averaged spectrum over the squeezing-axis 2ω amplitude.
SpectrumTable squeezed_spectrum(const FieldConfig& cfg, const AtomConfig& atom, const SqueezeConfig& squeeze,
                                const Numerics& num, NodeCache& cache, int threads = 1);

/// Last order in q_lo, q_lo + step, ... ≤ q_max whose peak is within a factor
/// ten of the median of the first five peaks.
real cutoff_order(const SpectrumTable& s, real q_lo, real q_max, int parity_step = 2);

}  // namespace hhgwm
