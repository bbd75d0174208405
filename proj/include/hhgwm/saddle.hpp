#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhgwm/action.hpp"
#include "hhgwm/config.hpp"

namespace hhgwm {

enum class SaddleMode { bare, sigma, sigma_phi, squeezed };
enum class TrajectoryClass { short_path, long_path, other, pole_artifact };

std::string to_string(SaddleMode m);
std::string to_string(TrajectoryClass c);
SaddleMode parse_mode(const std::string& s);

/// Continuation label of a quantum orbit: which half-cycle of the driver
/// ionizes and which member of the short/long pair it grew from.
struct BranchLabel {
  int half_cycle = 0;
  bool is_long = false;

  std::string str() const { return std::string(is_long ? "long" : "short") + std::to_string(half_cycle); }
  bool operator==(const BranchLabel&) const = default;
};

struct SaddleSolution {
  cplx p_s;
  cplx t_ion;
  cplx t_re;
  std::optional<cplx> eps_s;
  real q = 0.0;
  SaddleMode mode = SaddleMode::bare;
  real residual = 0.0;
  bool hessian_ok = true;
  TrajectoryClass traj_class = TrajectoryClass::other;
  BranchLabel branch;

  real excursion() const { return (t_re - t_ion).real(); }
};

struct CorrectionTerms {
  cplx delta_ip;
  cplx delta_x;
  cplx delta_ekin;
};

struct ClassicalGuess {
  real t_ion;
  real t_re;
  real p;
  BranchLabel branch;
};

/// Simple-man returns (electron born at rest, first return within 1.5 T)
/// with kinetic energy qω − I_p; at most four per cycle.
std::vector<ClassicalGuess> classical_guesses(const FieldConfig& cfg, const AtomConfig& atom, real q);

/// Stationarity conditions of the mode-dependent phase. Variables are
/// z = (p, t_ion, t_re), or (p, t_ion, t_re, ε_s) for the squeezed mode where
/// the last equation is multiplied by ς so that ς → 0 degenerates smoothly.
class SaddleSystem {
 public:
  SaddleSystem(const TwoColorField& field, const AtomConfig& atom, const Numerics& num, real q,
               SaddleMode mode, std::optional<SqueezeConfig> squeeze = std::nullopt);

  int dim() const { return mode_ == SaddleMode::squeezed ? 4 : 3; }
  SaddleMode mode() const { return mode_; }
  real q() const { return q_; }
  const Action& action() const { return action_; }
  /// Φ participates in the equations (sigma_phi without a resonance).
  bool phi_in_equations() const;

  cvec equations(const cvec& z) const;
  /// Unscaled gradient of phase().
  cvec gradient(const cvec& z) const;
  /// Ψ = S₀ + I_pτ [+ σ] [+ Φ] − qωt_re, plus the Gaussian ε term when squeezed.
  cplx phase(const cvec& z) const;
  matrix<cplx> hessian(const cvec& z) const;

 private:
  TwoColorField node_field(cplx eps) const;

  TwoColorField field_;
  AtomConfig atom_;
  Numerics num_;
  real q_;
  SaddleMode mode_;
  std::optional<SqueezeConfig> squeeze_;
  Action action_;
};

cvec to_vector(const SaddleSolution& s);

/// Solves at one harmonic order. Bare orbits are anchored on classical
/// returns and continued in q, then the 2ω amplitude is ramped from zero.
/// Pole artifacts found in sigma_phi mode are returned tagged.
std::vector<SaddleSolution> solve_saddles(const FieldConfig& cfg, const AtomConfig& atom,
                                          const Numerics& num, real q, SaddleMode mode);

/// Same, for many orders sharing one bare continuation path.
std::vector<std::vector<SaddleSolution>> solve_saddles(const FieldConfig& cfg, const AtomConfig& atom,
                                                       const Numerics& num, const std::vector<real>& qs,
                                                       SaddleMode mode);

/// Four-variable squeezed-driver orbits, continued in ς from the sigma-mode
/// solution with the exact quadratic 2ω term.
std::vector<SaddleSolution> solve_saddles_squeezed(const FieldConfig& cfg, const AtomConfig& atom,
                                                   const SqueezeConfig& squeeze, const Numerics& num,
                                                   real q);

/// Dispatches on the mode; squeezed needs the squeeze block. Orders where the
/// squeezed continuation fails come back empty.
std::vector<std::vector<SaddleSolution>> solve_saddles(const FieldConfig& cfg, const AtomConfig& atom,
                                                       const Numerics& num, const std::vector<real>& qs,
                                                       SaddleMode mode, const std::optional<SqueezeConfig>& squeeze);

CorrectionTerms correction_terms(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                                 const SaddleSolution& sol);

struct SaddleHessian {
  matrix<cplx> h;
  bool diverged = false;
};

SaddleHessian hessian(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                      const SaddleSolution& sol, std::optional<SqueezeConfig> squeeze = std::nullopt);

struct Partitioned {
  std::vector<SaddleSolution> accepted;
  std::vector<SaddleSolution> artifacts;
};

/// Moves sigma_phi solutions with min |p_s + A_ω| < delta, and any solution
/// whose Hessian diverged, to the artifact list.
Partitioned filter_poles(const FieldConfig& cfg, std::vector<SaddleSolution> sols, real delta);

struct ExcursionRow {
  real q;
  SaddleMode mode;
  real phi;
  BranchLabel branch;
  TrajectoryClass traj_class;
  real excursion;  // in periods
  bool converged;
};

std::vector<ExcursionRow> excursion_table(const FieldConfig& cfg, const AtomConfig& atom,
                                          const Numerics& num, const std::vector<real>& qs,
                                          const std::vector<SaddleMode>& modes,
                                          const std::vector<real>& phis, int threads = 1,
                                          const std::optional<SqueezeConfig>& squeeze = std::nullopt);

}  // namespace hhgwm
