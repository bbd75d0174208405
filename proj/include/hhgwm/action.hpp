#pragma once

#include "hhgwm/dipole.hpp"

namespace hhgwm {

/// Antiderivatives of the monochromatic potentials and their products,
/// closed form and analytic in complex t. Differences between two times
/// give the τ-integrals entering the action.
struct Antiderivatives {
  cplx a;     // ∫ A_ω
  cplx aa;    // ∫ A_ω²
  cplx b;     // ∫ A_2ω
  cplx ab;    // ∫ A_ω A_2ω
  cplx bb;    // ∫ A_2ω²

  Antiderivatives operator-(const Antiderivatives& o) const {
    return {a - o.a, aa - o.aa, b - o.b, ab - o.ab, bb - o.bb};
  }
};

Antiderivatives antiderivatives(const TwoColorField& f, cplx t);

/// Derivatives of the 2ω entries with respect to one quadrature amplitude
/// (the ω entries are returned as zero).
Antiderivatives axis_derivative(const TwoColorField& f, SqueezeAxis axis, cplx t);

struct PhaseBreakdown {
  cplx s0;
  cplx ip_term;
  cplx sigma;
  cplx phi_wv;
  cplx total;  // s0 + ip_term + sigma + Re(phi_wv)
};

struct PhiPartials {
  cplx dt;
  cplx dt1;
  cplx dp;
};

/// Shared evaluation context for the action and its corrections: field,
/// dipole model (Fano-aware) and the second-order σ flag.
class Action {
 public:
  Action(const TwoColorField& field, const AtomConfig& atom, bool second_order = false,
         real pole_guard = 1e-6);

  const TwoColorField& field() const { return field_; }
  const DipoleModel& dipole() const { return dipole_; }
  real ip() const { return ip_; }
  bool second_order() const { return second_order_; }

  /// ½∫_{t₁}^{t} (p + A_ω)² dτ.
  cplx s0(cplx p, cplx t1, cplx t) const;
  /// ∫_{t₁}^{t} (p + A_ω) A_2ω dτ, plus ½∫A_2ω² with the second-order flag.
  cplx sigma(cplx p, cplx t1, cplx t) const;
  /// A_2ω(t₁) D(p + A_ω(t₁)) − A_2ω(t) D(p + A_ω(t)).
  cplx phi(cplx p, cplx t1, cplx t) const;
  PhiPartials phi_partials(cplx p, cplx t1, cplx t) const;

  PhaseBreakdown breakdown(cplx p, cplx t1, cplx t) const;

 private:
  TwoColorField field_;
  DipoleModel dipole_;
  real ip_;
  bool second_order_;
};

cplx action_s0(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1, cplx t);
cplx sigma_correction(const TwoColorField& field, cplx p, cplx t1, cplx t,
                      bool include_second_order = false);
cplx phi_correction(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1, cplx t,
                    real pole_guard = 1e-6);
PhiPartials phi_partials(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1,
                         cplx t, real pole_guard = 1e-6);
PhaseBreakdown total_phase(const TwoColorField& field, const AtomConfig& atom, cplx p, cplx t1,
                           cplx t, bool include_second_order = false, real pole_guard = 1e-6);

}  // namespace hhgwm
