#pragma once

#include "hhgwm/field.hpp"

namespace hhgwm {

/// Kinetic momentum p + A(t), the argument of every matrix element.
struct KineticMomentum {
  cplx value;
};

/// Value and first two v-derivatives of ⟨g|d|v⟩.
struct DipoleJet {
  cplx d;
  cplx d1;
  cplx d2;
};

/// Bound-continuum matrix elements of the truncated harmonic-oscillator
/// ground state, optionally dressed by an autoionizing resonance:
///
///   d(v)   = i (πα)^{-3/4} (v/α) exp(-v²/2α)
///   d_F(v) = d(v)/√(4πΓ) · [Γ/(v²/2 - ω_R - iΓ) - i/(1 - iq)]
///
/// ⟨g|d²|v⟩ = -i ∂_v ⟨g|d|v⟩ in both cases, and the weak value is
/// D(v) = ⟨g|d²|v⟩ / ⟨g|d|v⟩. Everything is analytic in complex v.
class DipoleModel {
 public:
  explicit DipoleModel(const AtomConfig& atom, real pole_guard = 1e-6);

  bool resonant() const { return fano_.has_value(); }
  real pole_guard() const { return guard_; }

  DipoleJet jet(cplx v) const;
  cplx value(cplx v) const { return jet(v).d; }
  cplx squared(cplx v) const { return -I * jet(v).d1; }

  /// Analytic continuation of conj(⟨g|d|conj v⟩), the ionization element.
  cplx ionization_value(cplx v) const { return std::conj(value(std::conj(v))); }
  cplx ionization_squared(cplx v) const { return std::conj(squared(std::conj(v))); }

  /// Throws PoleProximity near zeros of ⟨g|d|v⟩.
  cplx weak_value(cplx v) const;
  cplx weak_value_derivative(cplx v) const;

 private:
  void check_pole(cplx v, const DipoleJet& j) const;

  real alpha_;
  real norm_;
  std::optional<FanoConfig> fano_;
  real guard_;
};

cplx dipole(const AtomConfig& atom, KineticMomentum v);
cplx dipole_squared(const AtomConfig& atom, KineticMomentum v);
cplx weak_value(const AtomConfig& atom, KineticMomentum v, real pole_guard = 1e-6);

cplx fano_dipole(const AtomConfig& atom, const FanoConfig& fano, KineticMomentum v);
cplx fano_dipole_squared(const AtomConfig& atom, const FanoConfig& fano, KineticMomentum v);
cplx fano_weak_value(const AtomConfig& atom, const FanoConfig& fano, KineticMomentum v,
                     real pole_guard = 1e-6);

/// Tunnel-barrier factor ΔF = ε sin(2ωt₁ + φ) / sin(ωt₁).
cplx tunnel_correction(const TwoColorField& field, cplx t1, real pole_guard = 1e-6);

}  // namespace hhgwm
