#include "hhgwm/action.hpp"

namespace hhgwm {

Antiderivatives antiderivatives(const TwoColorField& f, cplx t) {
  const real w = f.omega();
  const real a = f.E_omega() / w;
  const cplx x = f.quad_x();
  const cplx y = f.quad_y();

  const cplx s1 = std::sin(w * t), c1 = std::cos(w * t);
  const cplx s2 = std::sin(2.0 * w * t), c2 = std::cos(2.0 * w * t);
  const cplx s3 = std::sin(3.0 * w * t), c3 = std::cos(3.0 * w * t);
  const cplx s4 = std::sin(4.0 * w * t), c4 = std::cos(4.0 * w * t);

  Antiderivatives r;
  r.a = (a / w) * c1;
  r.aa = a * a * (t / 2.0 - s2 / (4.0 * w));
  r.b = (x * c2 - y * s2) / (4.0 * w * w);

  // sin ωt sin 2ωt = ½(cos ωt − cos 3ωt),  sin ωt cos 2ωt = ½(sin 3ωt − sin ωt)
  const cplx iss = 0.5 * (s1 / w - s3 / (3.0 * w));
  const cplx isc = 0.5 * (c1 / w - c3 / (3.0 * w));
  r.ab = (a / (2.0 * w)) * (x * iss + y * isc);

  const cplx iss2 = t / 2.0 - s4 / (8.0 * w);
  const cplx icc2 = t / 2.0 + s4 / (8.0 * w);
  const cplx isc2 = -c4 / (8.0 * w);
  r.bb = (x * x * iss2 + 2.0 * x * y * isc2 + y * y * icc2) / (4.0 * w * w);
  return r;
}

Antiderivatives axis_derivative(const TwoColorField& f, SqueezeAxis axis, cplx t) {
  const real w = f.omega();
  const real a = f.E_omega() / w;
  const cplx x = f.quad_x();
  const cplx y = f.quad_y();
  const cplx s1 = std::sin(w * t), c1 = std::cos(w * t);
  const cplx s2 = std::sin(2.0 * w * t), c2 = std::cos(2.0 * w * t);
  const cplx s3 = std::sin(3.0 * w * t), c3 = std::cos(3.0 * w * t);
  const cplx s4 = std::sin(4.0 * w * t), c4 = std::cos(4.0 * w * t);
  const real k = 1.0 / (4.0 * w * w);

  Antiderivatives r{};
  if (axis == SqueezeAxis::x) {
    r.b = c2 * k;
    r.ab = (a / (2.0 * w)) * 0.5 * (s1 / w - s3 / (3.0 * w));
    r.bb = 2.0 * k * (x * (t / 2.0 - s4 / (8.0 * w)) + y * (-c4 / (8.0 * w)));
  } else {
    r.b = -s2 * k;
    r.ab = (a / (2.0 * w)) * 0.5 * (c1 / w - c3 / (3.0 * w));
    r.bb = 2.0 * k * (x * (-c4 / (8.0 * w)) + y * (t / 2.0 + s4 / (8.0 * w)));
  }
  return r;
}

Action::Action(const TwoColorField& field, const AtomConfig& atom, bool second_order, real pole_guard)
    : field_(field), dipole_(atom, pole_guard), ip_(atom.Ip), second_order_(second_order) {}

cplx Action::s0(cplx p, cplx t1, cplx t) const {
  const auto d = antiderivatives(field_, t) - antiderivatives(field_, t1);
  return 0.5 * (p * p * (t - t1) + 2.0 * p * d.a + d.aa);
}

cplx Action::sigma(cplx p, cplx t1, cplx t) const {
  if (!field_.has_second_color()) return 0.0;
  const auto d = antiderivatives(field_, t) - antiderivatives(field_, t1);
  cplx s = p * d.b + d.ab;
  if (second_order_) s += 0.5 * d.bb;
  return s;
}

cplx Action::phi(cplx p, cplx t1, cplx t) const {
  if (!field_.has_second_color()) return 0.0;
  const cplx v1 = p + field_.a_w(t1);
  const cplx v = p + field_.a_w(t);
  return field_.a_2w(t1) * dipole_.weak_value(v1) - field_.a_2w(t) * dipole_.weak_value(v);
}

PhiPartials Action::phi_partials(cplx p, cplx t1, cplx t) const {
  if (!field_.has_second_color()) return {};
  const cplx v1 = p + field_.a_w(t1);
  const cplx v = p + field_.a_w(t);
  const cplx D1 = dipole_.weak_value(v1), D = dipole_.weak_value(v);
  const cplx dD1 = dipole_.weak_value_derivative(v1), dD = dipole_.weak_value_derivative(v);
  const cplx A1 = field_.a_2w(t1), A = field_.a_2w(t);

  // dv/dt = −E_ω(t)
  PhiPartials r;
  r.dt = field_.e_2w(t) * D + A * dD * field_.e_w(t);
  r.dt1 = -field_.e_2w(t1) * D1 - A1 * dD1 * field_.e_w(t1);
  r.dp = A1 * dD1 - A * dD;
  return r;
}

PhaseBreakdown Action::breakdown(cplx p, cplx t1, cplx t) const {
  PhaseBreakdown b;
  b.s0 = s0(p, t1, t);
  b.ip_term = ip_ * (t - t1);
  b.sigma = sigma(p, t1, t);
  b.phi_wv = phi(p, t1, t);
  b.total = b.s0 + b.ip_term + b.sigma + b.phi_wv.real();
  return b;
}

cplx action_s0(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1, cplx t) {
  return Action(field, atom).s0(p, t1, t);
}

cplx sigma_correction(const TwoColorField& field, cplx p, cplx t1, cplx t, bool include_second_order) {
  return Action(field, AtomConfig{}, include_second_order).sigma(p, t1, t);
}

cplx phi_correction(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1, cplx t,
                    real pole_guard) {
  return Action(field, atom, false, pole_guard).phi(p, t1, t);
}

PhiPartials phi_partials(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1, cplx t,
                         real pole_guard) {
  return Action(field, atom, false, pole_guard).phi_partials(p, t1, t);
}

PhaseBreakdown total_phase(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1, cplx t,
                           bool include_second_order, real pole_guard) {
  return Action(field, atom, include_second_order, pole_guard).breakdown(p, t1, t);
}

}  // namespace hhgwm
