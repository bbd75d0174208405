#include "hhgwm/dipole.hpp"

#include <sstream>

#include "hhgwm/errors.hpp"

namespace hhgwm {

DipoleModel::DipoleModel(const AtomConfig& atom, real pole_guard)
    : alpha_(atom.alpha),
      norm_(std::pow(1.0 / (pi * atom.alpha), 0.75)),
      fano_(atom.fano),
      guard_(pole_guard) {}

DipoleJet DipoleModel::jet(cplx v) const {
  const real a = alpha_;
  const cplx e = std::exp(-v * v / (2.0 * a));
  const cplx c = I * norm_ * e;
  DipoleJet g{c * (v / a), c * (1.0 / a - v * v / (a * a)),
              c * (-3.0 * v / (a * a) + v * v * v / (a * a * a))};
  if (!fano_) return g;

  const real gam = fano_->gamma;
  const cplx background = -I / (1.0 - I * fano_->q_asym);
  const cplx delta = v * v / 2.0 - fano_->omega_R - I * gam;
  const cplx h = gam / delta + background;
  const cplx h1 = -gam * v / (delta * delta);
  const cplx h2 = -gam / (delta * delta) + 2.0 * gam * v * v / (delta * delta * delta);
  const real n = 1.0 / std::sqrt(4.0 * pi * gam);
  return {n * g.d * h, n * (g.d1 * h + g.d * h1), n * (g.d2 * h + 2.0 * g.d1 * h1 + g.d * h2)};
}

void DipoleModel::check_pole(cplx v, const DipoleJet& j) const {
  const bool near = fano_ ? std::abs(j.d) <= guard_ : std::abs(v) <= guard_;
  if (near) {
    std::ostringstream os;
    os << "weak value pole: |d(v)| vanishes at v = " << v;
    throw PoleProximity(os.str());
  }
}

cplx DipoleModel::weak_value(cplx v) const {
  const auto j = jet(v);
  check_pole(v, j);
  if (!fano_) return (-I / v) * (1.0 - v * v / alpha_);
  return -I * j.d1 / j.d;
}

cplx DipoleModel::weak_value_derivative(cplx v) const {
  const auto j = jet(v);
  check_pole(v, j);
  if (!fano_) return I * (1.0 / (v * v) + 1.0 / alpha_);
  const cplx r = j.d1 / j.d;
  return -I * (j.d2 / j.d - r * r);
}

namespace {

AtomConfig plain(const AtomConfig& atom) {
  AtomConfig a = atom;
  a.fano.reset();
  return a;
}

AtomConfig resonant(const AtomConfig& atom, const FanoConfig& fano) {
  AtomConfig a = atom;
  a.fano = fano;
  return a;
}

}  // namespace

cplx dipole(const AtomConfig& atom, KineticMomentum v) { return DipoleModel(plain(atom)).value(v.value); }

cplx dipole_squared(const AtomConfig& atom, KineticMomentum v) {
  return DipoleModel(plain(atom)).squared(v.value);
}

cplx weak_value(const AtomConfig& atom, KineticMomentum v, real pole_guard) {
  return DipoleModel(plain(atom), pole_guard).weak_value(v.value);
}

cplx fano_dipole(const AtomConfig& atom, const FanoConfig& fano, KineticMomentum v) {
  return DipoleModel(resonant(atom, fano)).value(v.value);
}

cplx fano_dipole_squared(const AtomConfig& atom, const FanoConfig& fano, KineticMomentum v) {
  return DipoleModel(resonant(atom, fano)).squared(v.value);
}

cplx fano_weak_value(const AtomConfig& atom, const FanoConfig& fano, KineticMomentum v,
                     real pole_guard) {
  return DipoleModel(resonant(atom, fano), pole_guard).weak_value(v.value);
}

cplx tunnel_correction(const TwoColorField& field, cplx t1, real pole_guard) {
  const real w = field.omega();
  const cplx den = field.E_omega() * std::sin(w * t1);
  if (std::abs(den) <= pole_guard * field.E_omega()) {
    std::ostringstream os;
    os << "tunnel correction pole: sin(ωt₁) vanishes at t₁ = " << t1;
    throw PoleProximity(os.str());
  }
  const cplx num = field.quad_x() * std::sin(2.0 * w * t1) + field.quad_y() * std::cos(2.0 * w * t1);
  return num / den;
}

}  // namespace hhgwm
