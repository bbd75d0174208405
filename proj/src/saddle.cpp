#include "hhgwm/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hhgwm/errors.hpp"
#include "hhgwm/newton.hpp"
#include "hhgwm/parallel.hpp"

namespace hhgwm {

std::string to_string(SaddleMode m) {
  switch (m) {
    case SaddleMode::bare: return "bare";
    case SaddleMode::sigma: return "sigma";
    case SaddleMode::sigma_phi: return "sigma_phi";
    case SaddleMode::squeezed: return "squeezed";
  }
  return "?";
}

std::string to_string(TrajectoryClass c) {
  switch (c) {
    case TrajectoryClass::short_path: return "short";
    case TrajectoryClass::long_path: return "long";
    case TrajectoryClass::other: return "other";
    case TrajectoryClass::pole_artifact: return "pole_artifact";
  }
  return "?";
}

SaddleMode parse_mode(const std::string& s) {
  for (auto m : {SaddleMode::bare, SaddleMode::sigma, SaddleMode::sigma_phi, SaddleMode::squeezed})
    if (to_string(m) == s) return m;
  throw ConfigError("invalid mode: unknown option '" + s + "'");
}

// ---------------------------------------------------------------------------
// classical returns

namespace {

struct SimpleMan {
  real w, a, T;

  real A(real t) const { return -a * std::sin(w * t); }
  real IA(real t) const { return (a / w) * std::cos(w * t); }

  // first zero of ∫_{t1}^{t1+τ} (A − A(t1)) for τ ≤ 1.5 T
  std::optional<real> return_time(real t1) const {
    const real A1 = A(t1);
    auto g = [&](real tau) { return IA(t1 + tau) - IA(t1) - A1 * tau; };
    const int n = 600;
    real lo = 1e-3 * T, glo = g(lo);
    for (int k = 1; k <= n; ++k) {
      const real hi = 1e-3 * T + (1.5 - 1e-3) * T * k / n;
      const real ghi = g(hi);
      if (glo == 0.0) return lo;
      if ((glo < 0.0) != (ghi < 0.0)) {
        real l = lo, h = hi, gl = glo;
        for (int it = 0; it < 80; ++it) {
          const real m = 0.5 * (l + h), gm = g(m);
          if ((gm < 0.0) == (gl < 0.0)) {
            l = m;
            gl = gm;
          } else {
            h = m;
          }
        }
        return 0.5 * (l + h);
      }
      lo = hi;
      glo = ghi;
    }
    return std::nullopt;
  }

  std::optional<real> return_energy(real t1) const {
    const auto tau = return_time(t1);
    if (!tau) return std::nullopt;
    const real v = A(t1 + *tau) - A(t1);
    return 0.5 * v * v;
  }
};

}  // namespace

std::vector<ClassicalGuess> classical_guesses(const FieldConfig& cfg, const AtomConfig& atom, real q) {
  const real w = cfg.omega;
  const real target = q * w - atom.Ip;
  const real up = ponderomotive_energy(cfg);
  if (target <= 0.0) {
    std::ostringstream os;
    os << "harmonic " << q << " lies below the ionization threshold";
    throw NoClassicalReturn(os.str());
  }
  if (target > 3.17 * up + 0.5 * w) {
    std::ostringstream os;
    os << "harmonic " << q << " lies beyond the classical cutoff";
    throw NoClassicalReturn(os.str());
  }

  const SimpleMan sm{w, cfg.E_omega / w, two_pi / w};
  const int K = 2000;
  std::vector<std::pair<real, real>> roots;  // (t_ion, τ)
  auto f = [&](real th) -> std::optional<real> {
    const auto e = sm.return_energy(th / w);
    if (!e) return std::nullopt;
    return *e - target;
  };
  std::optional<real> prev = f(0.0);
  for (int k = 1; k <= K; ++k) {
    const real th0 = two_pi * (k - 1) / K, th1 = two_pi * k / K;
    const auto cur = f(th1);
    if (prev && cur && ((*prev < 0.0) != (*cur < 0.0))) {
      real l = th0, h = th1, fl = *prev;
      for (int it = 0; it < 80; ++it) {
        const real m = 0.5 * (l + h);
        const auto fm = f(m);
        if (!fm) break;
        if ((*fm < 0.0) == (fl < 0.0)) {
          l = m;
          fl = *fm;
        } else {
          h = m;
        }
      }
      const real th = 0.5 * (l + h);
      if (const auto tau = sm.return_time(th / w)) roots.emplace_back(th / w, *tau);
    }
    prev = cur;
  }

  std::vector<ClassicalGuess> out;
  for (int half = 0; half < 2; ++half) {
    std::vector<std::pair<real, real>> mine;
    for (const auto& r : roots)
      if ((r.first * w < pi) == (half == 0)) mine.push_back(r);
    std::sort(mine.begin(), mine.end(), [](const auto& l, const auto& r) { return l.second < r.second; });
    for (std::size_t i = 0; i < mine.size(); ++i) {
      const auto [t1, tau] = mine[i];
      const bool is_long = mine.size() >= 2 ? i > 0 : tau > 0.65 * sm.T;
      out.push_back({t1, t1 + tau, -sm.A(t1), {half, is_long}});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// the system

SaddleSystem::SaddleSystem(const TwoColorField& field, const AtomConfig& atom, const Numerics& num, real q,
                           SaddleMode mode, std::optional<SqueezeConfig> squeeze)
    : field_(field),
      atom_(atom),
      num_(num),
      q_(q),
      mode_(mode),
      squeeze_(squeeze),
      action_(field, atom, mode == SaddleMode::squeezed || num.second_order, num.pole_guard) {
  if (mode == SaddleMode::squeezed && !squeeze) throw ConfigError("invalid mode: squeezed requires I_squ");
}

bool SaddleSystem::phi_in_equations() const {
  return mode_ == SaddleMode::sigma_phi && !atom_.fano.has_value();
}

TwoColorField SaddleSystem::node_field(cplx eps) const {
  return field_.with_axis_amplitude(squeeze_->axis, eps);
}

cvec SaddleSystem::gradient(const cvec& z) const {
  const cplx p = z[0], t1 = z[1], t = z[2];
  const real w = field_.omega();

  if (mode_ == SaddleMode::squeezed) {
    const cplx e = z[3];
    const TwoColorField f = node_field(e);
    const auto d = antiderivatives(f, t) - antiderivatives(f, t1);
    const auto dd = axis_derivative(f, squeeze_->axis, t) - axis_derivative(f, squeeze_->axis, t1);
    const cplx u1 = p + f.a_w(t1) + f.a_2w(t1);
    const cplx u = p + f.a_w(t) + f.a_2w(t);
    const cplx ebar = field_.axis_amplitude(squeeze_->axis);
    cvec g(4);
    g[0] = p * (t - t1) + d.a + d.b;
    g[1] = -(0.5 * u1 * u1 + action_.ip());
    g[2] = 0.5 * u * u + action_.ip() - q_ * w;
    const real vs = squeeze_->varsigma();
    // at ς = 0 the constraint itself stands in for the (infinite) gradient
    g[3] = vs > 0.0 ? p * dd.b + dd.ab + 0.5 * dd.bb - I * (e - ebar) / vs : -I * (e - ebar);
    return g;
  }

  const cplx v1 = p + field_.a_w(t1);
  const cplx v = p + field_.a_w(t);
  const auto d = antiderivatives(field_, t) - antiderivatives(field_, t1);
  cvec g(3);
  g[0] = p * (t - t1) + d.a;
  g[1] = -(0.5 * v1 * v1 + action_.ip());
  g[2] = 0.5 * v * v + action_.ip() - q_ * w;
  if (mode_ != SaddleMode::bare) {
    const cplx b1 = field_.a_2w(t1), b = field_.a_2w(t);
    g[0] += d.b;
    g[1] -= v1 * b1;
    g[2] += v * b;
    if (action_.second_order()) {
      g[1] -= 0.5 * b1 * b1;
      g[2] += 0.5 * b * b;
    }
  }
  if (phi_in_equations()) {
    const auto dp = action_.phi_partials(p, t1, t);
    g[0] += dp.dp;
    g[1] += dp.dt1;
    g[2] += dp.dt;
  }
  return g;
}

cvec SaddleSystem::equations(const cvec& z) const {
  cvec g = gradient(z);
  if (mode_ == SaddleMode::squeezed && squeeze_->varsigma() > 0.0) g[3] *= squeeze_->varsigma();
  return g;
}

cplx SaddleSystem::phase(const cvec& z) const {
  const cplx p = z[0], t1 = z[1], t = z[2];
  const real w = field_.omega();
  if (mode_ == SaddleMode::squeezed) {
    const TwoColorField f = node_field(z[3]);
    const Action act(f, atom_, true, num_.pole_guard);
    const cplx de = z[3] - field_.axis_amplitude(squeeze_->axis);
    return act.s0(p, t1, t) + act.ip() * (t - t1) + act.sigma(p, t1, t) - q_ * w * t -
           I * de * de / (2.0 * squeeze_->varsigma());
  }
  cplx psi = action_.s0(p, t1, t) + action_.ip() * (t - t1) - q_ * w * t;
  if (mode_ != SaddleMode::bare) psi += action_.sigma(p, t1, t);
  if (phi_in_equations()) psi += action_.phi(p, t1, t);
  return psi;
}

matrix<cplx> SaddleSystem::hessian(const cvec& z) const {
  return jacobian([this](const cvec& x) { return gradient(x); }, z);
}

cvec to_vector(const SaddleSolution& s) {
  cvec z(s.eps_s ? 4 : 3);
  z << s.p_s, s.t_ion, s.t_re;
  if (s.eps_s) z[3] = *s.eps_s;
  return z;
}

// ---------------------------------------------------------------------------
// continuation

namespace {

struct Track {
  BranchLabel label;
  cvec z;
  bool alive = true;
};

std::optional<cvec> newton(const SaddleSystem& sys, const cvec& z0, const Numerics& num) {
  auto res = damped_newton([&](const cvec& z) { return sys.equations(z); }, z0, num.solver_tol,
                           num.max_iterations);
  if (!res.converged) return std::nullopt;
  return res.z;
}

// Complex ionization time from a classical return: p + A(t₁) = ±i√(2I_p).
cplx complex_ionization_time(const TwoColorField& f, real ip, real p, real t1_classical) {
  const real w = f.omega();
  const real a = f.E_omega() / w;
  const real kappa = std::sqrt(2.0 * ip);
  const real target = std::fmod(w * t1_classical, two_pi);
  cplx best{};
  real best_dist = 1e300;
  for (const real sgn : {1.0, -1.0}) {
    const cplx s = (p - sgn * I * kappa) / a;
    const cplx u = std::asin(s);
    for (const cplx cand : {u, cplx(pi) - u}) {
      if (cand.imag() <= 0.0) continue;
      for (int k = -2; k <= 2; ++k) {
        const cplx c = cand + two_pi * k;
        const real dist = std::abs(c.real() - target);
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
    }
  }
  return best / w + (t1_classical - target / w);
}

real classical_cutoff_order(const FieldConfig& cfg, const AtomConfig& atom) {
  return (atom.Ip + 3.17 * ponderomotive_energy(cfg)) / cfg.omega;
}

std::vector<Track> anchor_tracks(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num, real qa) {
  const TwoColorField bare_field(cfg);
  const SaddleSystem sys(bare_field, atom, num, qa, SaddleMode::bare);
  std::vector<Track> tracks;
  for (const auto& g : classical_guesses(cfg, atom, qa)) {
    cvec z0(3);
    z0 << g.p, complex_ionization_time(bare_field, atom.Ip, g.p, g.t_ion), g.t_re;
    if (auto z = newton(sys, z0, num)) {
      bool dup = false;
      for (const auto& t : tracks) dup = dup || (t.z - *z).norm() < 1e-6 * (1.0 + z->norm());
      if (!dup) tracks.push_back({g.branch, *z, true});
    }
  }
  return tracks;
}

// Walks a bare track from q0 to q1 in steps of at most 0.25 orders.
bool continue_in_q(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num, Track& tr, real q0,
                   real q1) {
  const TwoColorField f(cfg);
  real q = q0;
  real dq = std::copysign(0.25, q1 - q0);
  cvec slope = cvec::Zero(3);  // dz/dq from the last accepted step
  while ((q1 - q) * dq > 1e-12) {
    const real qn = (std::abs(q1 - q) < std::abs(dq)) ? q1 : q + dq;
    const SaddleSystem sys(f, atom, num, qn, SaddleMode::bare);
    auto z = newton(sys, tr.z + slope * (qn - q), num);
    if (!z) {
      dq *= 0.5;
      slope.setZero();
      if (std::abs(dq) < 1e-3) return false;
      continue;
    }
    slope = (*z - tr.z) / (qn - q);
    tr.z = *z;
    q = qn;
  }
  return true;
}

// Ramps the 2ω amplitude from zero at fixed q with jump detection.
std::optional<cvec> ramp_epsilon(const TwoColorField& target, const AtomConfig& atom, const Numerics& num,
                                 real q, SaddleMode mode, const cvec& z_bare) {
  cvec z = z_bare;
  real s = 0.0, ds = 0.125;
  real rate = -1.0;
  const cplx x = target.quad_x(), y = target.quad_y();
  while (s < 1.0 - 1e-15) {
    const real sn = std::min(1.0, s + ds);
    const FieldConfig base{target.E_omega(), target.omega(), 0.0, 0.0, target.envelope_shape(), target.n_cycles()};
    const auto f = TwoColorField::with_quadratures(base, sn * x, sn * y);
    const SaddleSystem sys(f, atom, num, q, mode);
    auto zn = newton(sys, z, num);
    const real jump = zn ? (*zn - z).norm() / (sn - s) : 0.0;
    if (!zn || (rate > 0.0 && jump > 10.0 * rate + 1e-3)) {
      ds *= 0.5;
      if (ds < 1.0 / 4096) return std::nullopt;
      continue;
    }
    rate = std::max(rate, jump);
    z = *zn;
    s = sn;
  }
  return z;
}

TrajectoryClass classify(real excursion, real T, real split) {
  const real x = excursion / T;
  if (x <= 0.0 || x >= 1.5) return TrajectoryClass::other;
  return x < split ? TrajectoryClass::short_path : TrajectoryClass::long_path;
}

SaddleSolution finish(const SaddleSystem& sys, const cvec& z, const BranchLabel& label, const Numerics& num,
                      real T) {
  SaddleSolution s;
  s.p_s = z[0];
  s.t_ion = z[1];
  s.t_re = z[2];
  if (z.size() == 4) s.eps_s = z[3];
  s.q = sys.q();
  s.mode = sys.mode();
  s.residual = sys.equations(z).cwiseAbs().maxCoeff();
  const auto H = sys.hessian(z);
  const auto block = H.topLeftCorner(3, 3);
  s.hessian_ok = block.cwiseAbs().maxCoeff() <= num.divergence_threshold && block.allFinite();
  s.traj_class = classify(s.excursion(), T, num.short_long_split);
  s.branch = label;
  return s;
}

// Seeds near p + A_ω = 0 at either end of an orbit, where Φ has its poles.
std::vector<cvec> pole_seeds(const TwoColorField& f, const cvec& z) {
  std::vector<cvec> seeds;
  for (const real r : {0.01, 0.02, 0.04}) {
    for (int k = 0; k < 8; ++k) {
      const cplx v0 = r * std::exp(I * (two_pi * k / 8.0 + pi / 8.0));
      cvec a = z, b = z;
      a[0] = -f.a_w(z[2]) + v0;
      b[0] = -f.a_w(z[1]) + v0;
      seeds.push_back(a);
      seeds.push_back(b);
    }
  }
  return seeds;
}

void dedupe_into(std::vector<SaddleSolution>& out, SaddleSolution s) {
  const cvec z = to_vector(s);
  for (const auto& o : out)
    if ((to_vector(o) - z).norm() < 1e-6 * (1.0 + z.norm())) return;
  out.push_back(std::move(s));
}

std::vector<std::vector<Track>> bare_family(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                                            const std::vector<real>& qs) {
  const real q_th = atom.Ip / cfg.omega;
  const real q_cut = classical_cutoff_order(cfg, atom);
  real lo = q_th + 1.0, hi = q_cut - 2.0;
  if (hi < lo) lo = hi = 0.5 * (q_th + q_cut);

  std::vector<std::size_t> order(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return qs[a] < qs[b]; });

  std::vector<std::vector<Track>> out(qs.size());
  if (qs.empty()) return out;
  const real qa = std::clamp(qs[order.front()], lo, hi);
  const auto anchors = anchor_tracks(cfg, atom, num, qa);

  // upward from the anchor, then downward
  for (int dir : {+1, -1}) {
    std::vector<Track> tracks = anchors;
    real q = qa;
    auto visit = [&](std::size_t idx) {
      for (auto& tr : tracks)
        if (tr.alive) tr.alive = continue_in_q(cfg, atom, num, tr, q, qs[idx]);
      q = qs[idx];
      for (const auto& tr : tracks)
        if (tr.alive) out[idx].push_back(tr);
    };
    if (dir > 0) {
      for (auto idx : order)
        if (qs[idx] >= qa) visit(idx);
    } else {
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (qs[*it] < qa) visit(*it);
    }
  }
  return out;
}

std::vector<SaddleSolution> perturb(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num, real q,
                                    SaddleMode mode, const std::vector<Track>& bare) {
  const TwoColorField f(cfg);
  const real T = cfg.period();
  const SaddleSystem sys(f, atom, num, q, mode);
  std::vector<SaddleSolution> out;
  for (const auto& tr : bare) {
    std::optional<cvec> z = tr.z;
    if (mode != SaddleMode::bare && f.has_second_color()) z = ramp_epsilon(f, atom, num, q, mode, tr.z);
    if (z) dedupe_into(out, finish(sys, *z, tr.label, num, T));
  }

  if (sys.phi_in_equations() && f.has_second_color()) {
    const auto physical = out;
    for (const auto& s : physical) {
      for (const auto& seed : pole_seeds(f, to_vector(s))) {
        if (auto z = newton(sys, seed, num)) {
          // roots reached only from pole seeds are never the continued orbit
          auto cand = finish(sys, *z, s.branch, num, T);
          cand.traj_class = TrajectoryClass::other;
          dedupe_into(out, cand);
        }
      }
    }
  }
  auto parts = filter_poles(cfg, out, num.pole_delta);
  out = std::move(parts.accepted);
  for (auto& a : parts.artifacts) {
    a.traj_class = TrajectoryClass::pole_artifact;
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

std::vector<std::vector<SaddleSolution>> solve_saddles(const FieldConfig& cfg, const AtomConfig& atom,
                                                       const Numerics& num, const std::vector<real>& qs,
                                                       SaddleMode mode) {
  if (mode == SaddleMode::squeezed) throw ConfigError("invalid mode: use solve_saddles_squeezed");
  const auto family = bare_family(cfg, atom, num, qs);
  std::vector<std::vector<SaddleSolution>> out(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    out[i] = perturb(cfg, atom, num, qs[i], mode, family[i]);
    if (out[i].empty()) {
      std::ostringstream os;
      os << "no saddle converged at q = " << qs[i] << " (mode " << to_string(mode) << ")";
      throw NonConvergence(os.str());
    }
  }
  return out;
}

std::vector<SaddleSolution> solve_saddles(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                                          real q, SaddleMode mode) {
  return solve_saddles(cfg, atom, num, std::vector<real>{q}, mode).front();
}

std::vector<SaddleSolution> solve_saddles_squeezed(const FieldConfig& cfg, const AtomConfig& atom,
                                                   const SqueezeConfig& squeeze, const Numerics& num, real q) {
  Numerics n2 = num;
  n2.second_order = true;
  const auto seeds = solve_saddles(cfg, atom, n2, q, SaddleMode::sigma);
  const TwoColorField f(cfg);
  const real T = cfg.period();
  const cplx ebar = f.axis_amplitude(squeeze.axis);

  std::vector<SaddleSolution> out;
  for (const auto& s : seeds) {
    if (s.traj_class == TrajectoryClass::pole_artifact) continue;
    cvec z(4);
    z << s.p_s, s.t_ion, s.t_re, ebar;
    // ramp ς from zero
    real frac = 0.0, dfrac = 0.125, rate = -1.0;
    bool ok = true;
    while (frac < 1.0 - 1e-15) {
      const real fn = std::min(1.0, frac + dfrac);
      const SqueezeConfig sq{squeeze.I_squ * fn, squeeze.axis};
      const SaddleSystem sys(f, atom, n2, q, SaddleMode::squeezed, sq);
      auto zn = newton(sys, z, n2);
      const real jump = zn ? (*zn - z).norm() / (fn - frac) : 0.0;
      if (!zn || (rate > 0.0 && jump > 10.0 * rate + 1e-3)) {
        dfrac *= 0.5;
        if (dfrac < 1.0 / 4096) {
          ok = false;
          break;
        }
        continue;
      }
      rate = std::max(rate, jump);
      z = *zn;
      frac = fn;
    }
    if (!ok) continue;
    const SaddleSystem sys(f, atom, n2, q, SaddleMode::squeezed, squeeze);
    dedupe_into(out, finish(sys, z, s.branch, n2, T));
  }
  if (out.empty()) {
    std::ostringstream os;
    os << "no squeezed saddle converged at q = " << q;
    throw NonConvergence(os.str());
  }
  return out;
}

std::vector<std::vector<SaddleSolution>> solve_saddles(const FieldConfig& cfg, const AtomConfig& atom,
                                                       const Numerics& num, const std::vector<real>& qs,
                                                       SaddleMode mode, const std::optional<SqueezeConfig>& squeeze) {
  if (mode != SaddleMode::squeezed) return solve_saddles(cfg, atom, num, qs, mode);
  if (!squeeze) throw ConfigError("invalid mode: squeezed requires I_squ");
  std::vector<std::vector<SaddleSolution>> out(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    try {
      out[i] = solve_saddles_squeezed(cfg, atom, *squeeze, num, qs[i]);
    } catch (const NonConvergence&) {
    }
  }
  return out;
}

CorrectionTerms correction_terms(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                                 const SaddleSolution& sol) {
  const TwoColorField f(cfg);
  const SaddleSystem sys(f, atom, num, sol.q, sol.mode == SaddleMode::squeezed ? SaddleMode::sigma : sol.mode);
  const Action& act = sys.action();
  const cplx p = sol.p_s, t1 = sol.t_ion, t = sol.t_re;
  const cplx v1 = p + f.a_w(t1), v = p + f.a_w(t);
  const cplx b1 = f.a_2w(t1), b = f.a_2w(t);
  const auto d = antiderivatives(f, t) - antiderivatives(f, t1);

  CorrectionTerms c{v1 * b1, d.b, v * b};
  if (act.second_order()) {
    c.delta_ip += 0.5 * b1 * b1;
    c.delta_ekin += 0.5 * b * b;
  }
  if (sys.phi_in_equations()) {
    const auto dp = act.phi_partials(p, t1, t);
    c.delta_ip -= dp.dt1;
    c.delta_x += dp.dp;
    c.delta_ekin += dp.dt;
  }
  return c;
}

SaddleHessian hessian(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                      const SaddleSolution& sol, std::optional<SqueezeConfig> squeeze) {
  const SaddleSystem sys(TwoColorField(cfg), atom, num, sol.q, sol.mode, squeeze);
  SaddleHessian out;
  try {
    out.h = sys.hessian(to_vector(sol));
  } catch (const PoleProximity&) {
    out.h = matrix<cplx>::Constant(sys.dim(), sys.dim(), cplx(std::numeric_limits<real>::infinity()));
  }
  const auto block = out.h.topLeftCorner(3, 3);
  out.diverged = !block.allFinite() || block.cwiseAbs().maxCoeff() > num.divergence_threshold;
  return out;
}

Partitioned filter_poles(const FieldConfig& cfg, std::vector<SaddleSolution> sols, real delta) {
  const TwoColorField f(cfg);
  Partitioned out;
  for (auto& s : sols) {
    const real vmin = std::min(std::abs(s.p_s + f.a_w(s.t_ion)), std::abs(s.p_s + f.a_w(s.t_re)));
    const bool near_pole = s.mode == SaddleMode::sigma_phi && vmin < delta;
    if (near_pole || !s.hessian_ok || s.traj_class == TrajectoryClass::pole_artifact)
      out.artifacts.push_back(std::move(s));
    else
      out.accepted.push_back(std::move(s));
  }
  return out;
}

std::vector<ExcursionRow> excursion_table(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                                          const std::vector<real>& qs, const std::vector<SaddleMode>& modes,
                                          const std::vector<real>& phis, int threads,
                                          const std::optional<SqueezeConfig>& squeeze) {
  struct Task {
    SaddleMode mode;
    real phi;
  };
  std::vector<Task> tasks;
  for (real phi : phis)
    for (auto m : modes) tasks.push_back({m, phi});

  std::vector<std::vector<ExcursionRow>> parts(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    FieldConfig c = cfg;
    c.phi = tasks[i].phi;
    c = validated(c);
    const real T = c.period();
    std::vector<std::vector<SaddleSolution>> sols;
    try {
      sols = solve_saddles(c, atom, num, qs, tasks[i].mode, squeeze);
    } catch (const NonConvergence&) {
      for (real q : qs) parts[i].push_back({q, tasks[i].mode, tasks[i].phi, {}, TrajectoryClass::other, NAN, false});
      return;
    }
    for (std::size_t k = 0; k < qs.size(); ++k) {
      if (sols[k].empty()) parts[i].push_back({qs[k], tasks[i].mode, tasks[i].phi, {}, TrajectoryClass::other, NAN, false});
      for (const auto& s : sols[k])
        if (s.traj_class != TrajectoryClass::pole_artifact)
          parts[i].push_back({qs[k], tasks[i].mode, tasks[i].phi, s.branch, s.traj_class, s.excursion() / T, true});
    }
  });

  std::vector<ExcursionRow> rows;
  for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
  return rows;
}

}  // namespace hhgwm
