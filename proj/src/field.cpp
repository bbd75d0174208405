#include "hhgwm/field.hpp"

#include <iostream>
#include <sstream>

#include "hhgwm/errors.hpp"

namespace hhgwm {

std::string to_string(Envelope e) { return e == Envelope::flat ? "flat" : "sin2"; }
std::string to_string(SqueezeAxis a) { return a == SqueezeAxis::x ? "x" : "y"; }

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    std::ostringstream os;
    os << "invalid " << field << ": must satisfy " << rule;
    throw ConfigError(os.str());
  }
}

}  // namespace

FieldConfig validated(FieldConfig cfg) {
  require(std::isfinite(cfg.E_omega) && cfg.E_omega > 0.0, "E_omega", "E_omega > 0");
  require(std::isfinite(cfg.omega) && cfg.omega > 0.0, "omega", "omega > 0");
  require(std::isfinite(cfg.epsilon) && cfg.epsilon >= 0.0, "epsilon", "epsilon >= 0");
  require(std::isfinite(cfg.phi), "phi", "finite");
  require(cfg.n_cycles >= 1, "n_cycles", "n_cycles >= 1");
  if (cfg.epsilon > 0.1) {
    std::clog << "warning: epsilon = " << cfg.epsilon
              << " is outside the perturbative regime (> 0.1)\n";
  }
  cfg.phi = std::fmod(cfg.phi, two_pi);
  if (cfg.phi < 0.0) cfg.phi += two_pi;
  if (cfg.phi >= two_pi) cfg.phi = 0.0;
  return cfg;
}

void validate(const AtomConfig& atom) {
  require(std::isfinite(atom.Ip) && atom.Ip > 0.0, "Ip", "Ip > 0");
  require(std::isfinite(atom.alpha) && atom.alpha > 0.0, "alpha", "alpha > 0");
  if (atom.fano) {
    require(std::isfinite(atom.fano->gamma) && atom.fano->gamma > 0.0, "gamma", "gamma > 0");
    require(std::isfinite(atom.fano->q_asym), "q_asym", "finite");
    require(std::isfinite(atom.fano->omega_R), "omega_R", "finite");
  }
}

void validate(const SqueezeConfig& sq) {
  require(std::isfinite(sq.I_squ) && sq.I_squ >= 0.0, "I_squ", "I_squ >= 0");
}

TwoColorField::TwoColorField(real e, real w, cplx x, cplx y, Envelope env, int n)
    : E_w_(e), w_(w), qx_(x), qy_(y), env_(env), n_cycles_(n) {}

TwoColorField::TwoColorField(const FieldConfig& cfg)
    : TwoColorField(cfg.E_omega, cfg.omega, cfg.epsilon * cfg.E_omega * std::cos(cfg.phi),
                    cfg.epsilon * cfg.E_omega * std::sin(cfg.phi), cfg.envelope_shape,
                    cfg.n_cycles) {}

TwoColorField TwoColorField::with_quadratures(const FieldConfig& cfg, cplx x, cplx y) {
  return TwoColorField(cfg.E_omega, cfg.omega, x, y, cfg.envelope_shape, cfg.n_cycles);
}

TwoColorField TwoColorField::with_axis_amplitude(SqueezeAxis axis, cplx value) const {
  TwoColorField out = *this;
  (axis == SqueezeAxis::x ? out.qx_ : out.qy_) = value;
  return out;
}

real TwoColorField::envelope(real t) const {
  if (t < 0.0 || t > duration()) return 0.0;
  if (env_ == Envelope::flat) return 1.0;
  const real s = std::sin(pi * t / duration());
  return s * s;
}

real TwoColorField::envelope_derivative(real t) const {
  if (t < 0.0 || t > duration() || env_ == Envelope::flat) return 0.0;
  const real arg = pi * t / duration();
  return (pi / duration()) * std::sin(2.0 * arg);
}

FieldSample electric_field(const TwoColorField& f, real t, bool with_envelope) {
  FieldSample s{};
  s.w = f.e_w(t);
  s.w2 = f.e_2w(t);
  if (with_envelope) {
    const real env = f.envelope(t);
    const real denv = f.envelope_derivative(t);
    s.w = env * s.w - denv * f.a_w(t);
    s.w2 = env * s.w2 - denv * f.a_2w(t);
  }
  s.total = s.w + s.w2;
  return s;
}

}  // namespace hhgwm
