#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>

#include "hhgwm/types.hpp"

namespace hhgwm {

enum class Envelope { flat, sin2 };
enum class SqueezeAxis { x, y };

std::string to_string(Envelope e);
std::string to_string(SqueezeAxis a);

/// Two-color laser parameters in atomic units. The 2ω amplitude is
/// `epsilon * E_omega`; `phi` is the two-color delay.
struct FieldConfig {
  real E_omega = 0.053;
  real omega = 0.057;
  real epsilon = 0.0;
  real phi = 0.0;
  Envelope envelope_shape = Envelope::sin2;
  int n_cycles = 8;

  real period() const { return two_pi / omega; }
  real duration() const { return n_cycles * period(); }
};

/// Checks invariants and returns a copy with `phi` reduced to [0, 2π).
/// Warns on stderr when epsilon leaves the perturbative regime.
FieldConfig validated(FieldConfig cfg);

struct FanoConfig {
  real gamma = 0.2;
  real q_asym = 1.0;
  real omega_R = 1.913;
};

struct AtomConfig {
  real Ip = 0.9;
  real alpha = 0.72;
  std::optional<FanoConfig> fano;

  /// Atom with the Gaussian width tied to the ionization potential.
  static AtomConfig from_ip(real ip) { return AtomConfig{ip, 0.8 * ip, std::nullopt}; }
};

void validate(const AtomConfig& atom);

struct SqueezeConfig {
  real I_squ = 1e-6;
  SqueezeAxis axis = SqueezeAxis::x;

  real varsigma() const { return 4.0 * I_squ; }
};

void validate(const SqueezeConfig& sq);

/// Ponderomotive energy E²/(4ω²).
inline real ponderomotive_energy(const FieldConfig& cfg) {
  return cfg.E_omega * cfg.E_omega / (4.0 * cfg.omega * cfg.omega);
}

/// Evaluator for the ω + 2ω drive. The 2ω component is held as a pair of
/// quadrature amplitudes so that squeezed-light nodes (and complex saddle
/// amplitudes) share one code path:
///
///   A_2ω(t) = -(x sin 2ωt + y cos 2ωt) / (2ω)
///
/// A classical drive has x = εE cos φ, y = εE sin φ, which reproduces
/// A_2ω(t) = -(εE / 2ω) sin(2ωt + φ).
class TwoColorField {
 public:
  TwoColorField(const FieldConfig& cfg);  // NOLINT: implicit on purpose

  static TwoColorField with_quadratures(const FieldConfig& cfg, cplx x, cplx y);

  real E_omega() const { return E_w_; }
  real omega() const { return w_; }
  cplx quad_x() const { return qx_; }
  cplx quad_y() const { return qy_; }
  Envelope envelope_shape() const { return env_; }
  int n_cycles() const { return n_cycles_; }
  real period() const { return two_pi / w_; }
  real duration() const { return n_cycles_ * period(); }
  bool has_second_color() const { return qx_ != cplx{} || qy_ != cplx{}; }
  bool real_quadratures() const { return qx_.imag() == 0.0 && qy_.imag() == 0.0; }

  /// Copy with one quadrature replaced.
  TwoColorField with_axis_amplitude(SqueezeAxis axis, cplx value) const;
  cplx axis_amplitude(SqueezeAxis axis) const { return axis == SqueezeAxis::x ? qx_ : qy_; }

  template <class T>
  T a_w(T t) const {
    using std::sin;
    return -(E_w_ / w_) * sin(w_ * t);
  }

  template <class T>
  T e_w(T t) const {
    using std::cos;
    return E_w_ * cos(w_ * t);
  }

  template <class T>
  T a_2w(T t) const {
    using std::cos;
    using std::sin;
    const T s = sin(2.0 * w_ * t);
    const T c = cos(2.0 * w_ * t);
    if constexpr (std::is_floating_point_v<T>) {
      return -(qx_.real() * s + qy_.real() * c) / (2.0 * w_);
    } else {
      return -(qx_ * s + qy_ * c) / (2.0 * w_);
    }
  }

  template <class T>
  T e_2w(T t) const {
    using std::cos;
    using std::sin;
    const T s = sin(2.0 * w_ * t);
    const T c = cos(2.0 * w_ * t);
    if constexpr (std::is_floating_point_v<T>) {
      return qx_.real() * c - qy_.real() * s;
    } else {
      return qx_ * c - qy_ * s;
    }
  }

  /// Pulse envelope f(t); zero outside [0, duration].
  real envelope(real t) const;
  real envelope_derivative(real t) const;

 private:
  TwoColorField(real e, real w, cplx x, cplx y, Envelope env, int n);

  real E_w_;
  real w_;
  cplx qx_;
  cplx qy_;
  Envelope env_;
  int n_cycles_;
};

/// A_ω(t) = -(E_ω/ω) sin(ωt); analytic in t, no envelope.
inline cplx vector_potential_w(const TwoColorField& f, cplx t) { return f.a_w(t); }

/// A_2ω(t) = -(εE_ω/2ω) sin(2ωt + φ) for a classical drive.
inline cplx vector_potential_2w(const TwoColorField& f, cplx t) { return f.a_2w(t); }

struct FieldSample {
  real total;
  real w;
  real w2;
};

/// Electric field components at real time. With the envelope the fields are
/// -d/dt[f(t) A(t)], so they stay consistent with the enveloped potentials.
FieldSample electric_field(const TwoColorField& f, real t, bool with_envelope);

}  // namespace hhgwm
