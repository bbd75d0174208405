#include "hhgwm/spectrum.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "hhgwm/errors.hpp"
#include "hhgwm/parallel.hpp"
#include "hhgwm/quadrature.hpp"

namespace hhgwm {

TimeGrid TimeGrid::for_pulse(const FieldConfig& cfg, int points_per_cycle) {
  if (points_per_cycle < 8) throw ConfigError("invalid points_per_cycle: must satisfy >= 8");
  return {cfg.period() / points_per_cycle, cfg.n_cycles * points_per_cycle};
}

std::size_t SpectrumTable::index_of(real q) const {
  auto it = std::lower_bound(omega.begin(), omega.end(), q);
  if (it == omega.end()) return omega.size() - 1;
  if (it != omega.begin() && q - *(it - 1) < *it - q) --it;
  return static_cast<std::size_t>(it - omega.begin());
}

real SpectrumTable::peak(real q, real half_width) const {
  auto lo = std::lower_bound(omega.begin(), omega.end(), q - half_width);
  auto hi = std::upper_bound(omega.begin(), omega.end(), q + half_width);
  real best = 0.0;
  for (auto it = lo; it != hi; ++it) best = std::max(best, intensity[it - omega.begin()]);
  return best;
}

namespace {

// Cumulative trapezoid, out[0] = 0.
template <class V>
V cumulative(const V& f, real dt) {
  V out(f.size());
  out[0] = 0.0;
  for (Eigen::Index k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * dt * (f[k] + f[k - 1]);
  return out;
}

// Smooth roll-off over the last fifth of the ionization window.
real lag_taper(real tau, real tau_max) {
  const real start = 0.8 * tau_max;
  if (tau <= start) return 1.0;
  const real c = std::cos(0.5 * pi * (tau - start) / (tau_max - start));
  return c * c;
}

}  // namespace

TimeDipole time_dipole(const TwoColorField& field, const AtomConfig& atom, const Numerics& num,
                       const TimeGrid& grid, int threads) {
  const int n = grid.n;
  const real dt = grid.dt;
  if (n < 2) throw ConfigError("invalid time grid: need at least 2 points");
  const DipoleModel dm(atom, num.pole_guard);
  const bool exponential = num.weak_value_form == WeakValueForm::exponential;

  TimeDipole out;
  out.t.resize(n);
  vec A(n), B(n), Ew(n), E2w(n);
  for (int k = 0; k < n; ++k) {
    const real t = grid.t(k);
    out.t[k] = t;
    const real f = field.envelope(t);
    A[k] = f * field.a_w(t);
    B[k] = f * field.a_2w(t);
    const auto e = electric_field(field, t, true);
    Ew[k] = e.w;
    E2w[k] = e.w2;
  }
  const vec IA = cumulative<vec>(A, dt);
  const vec IAA = cumulative<vec>(A.cwiseProduct(A), dt);
  const vec IB = cumulative<vec>(B, dt);
  const vec IAB = cumulative<vec>(A.cwiseProduct(B), dt);
  const vec IBB = cumulative<vec>(B.cwiseProduct(B), dt);

  const real tau_max = num.tau_max_cycles * field.period();
  const int M = std::min(n - 1, static_cast<int>(std::floor(tau_max / dt)));
  cvec spread(M + 1);
  vec taper(M + 1);
  for (int m = 1; m <= M; ++m) {
    const real tau = m * dt;
    spread[m] = std::pow(two_pi / (num.eps_reg + I * tau / 2.0), 1.5);
    taper[m] = lag_taper(tau, tau_max);
  }

  out.half = cvec::Zero(n);
  std::vector<int> hits(n, 0);
  const int chunk = 64;
  const int nchunks = (n + chunk - 1) / chunk;
  parallel_for(nchunks, threads, [&](std::size_t c) {
    const int k0 = static_cast<int>(c) * chunk;
    const int k1 = std::min(n, k0 + chunk);
    for (int k = k0; k < k1; ++k) {
      cplx acc = 0.0;
      for (int m = 1; m <= std::min(M, k); ++m) {
        const int j = k - m;
        const real tau = m * dt;
        const real Etot = Ew[j] + E2w[j];
        if (Etot == 0.0 && Ew[j] == 0.0) continue;
        const real dA = IA[k] - IA[j];
        const real p = -dA / tau;
        const real s0 = 0.5 * (IAA[k] - IAA[j] - dA * dA / tau);
        real sigma = p * (IB[k] - IB[j]) + IAB[k] - IAB[j];
        if (num.second_order) sigma += 0.5 * (IBB[k] - IBB[j]);
        const real vr = p + A[k];
        const real vi = p + A[j];
        const DipoleJet jr = dm.jet(vr);
        const DipoleJet ji = dm.jet(vi);
        cplx rec, ion, drive;
        if (!exponential) {
          // d + iA₂d² with d² = −i∂d, i.e. d(v + A₂) to first order
          rec = jr.d + B[k] * jr.d1;
          ion = std::conj(ji.d + B[j] * ji.d1);
          drive = Etot;
        } else {
          if (std::abs(jr.d) <= num.pole_guard || std::abs(ji.d) <= num.pole_guard ||
              std::abs(E2w[j]) > std::abs(Ew[j])) {
            ++hits[k];
            continue;
          }
          // A₂D is real here and grows like A₂/v near zeros of d; past 1 the
          // exponent is no longer a small correction, so those samples count as pole hits
          const cplx xr = B[k] * (jr.d1 / jr.d), xi = B[j] * (ji.d1 / ji.d);
          if (std::abs(xr) > 1.0 || std::abs(xi) > 1.0) {
            ++hits[k];
            continue;
          }
          rec = jr.d * std::exp(xr);
          ion = std::conj(ji.d * std::exp(xi));
          drive = Ew[j] * std::exp(E2w[j] / Ew[j]);
        }
        acc += taper[m] * drive * ion * rec * spread[m] * std::exp(-I * (s0 + atom.Ip * tau + sigma));
      }
      out.half[k] = I * acc * dt;
    }
  });
  out.d = out.half + out.half.conjugate();
  for (int h : hits) out.pole_hits += h;
  return out;
}

vec spectral_window(const TimeDipole& dip, const FieldConfig& cfg, const Numerics& num) {
  const Eigen::Index n = dip.d.size();
  vec w = vec::Ones(n);
  if (cfg.envelope_shape == Envelope::flat) {
    // sin² over whole cycles after the first τ_max, which still carries the
    // switch-on transient; whole cycles put the window nulls on the harmonics
    const real D = cfg.duration();
    const real t0 = std::min(std::ceil(num.tau_max_cycles), std::floor(0.5 * cfg.n_cycles)) * cfg.period();
    for (Eigen::Index k = 0; k < n; ++k) {
      const real t = dip.t[k];
      const real s = t < t0 ? 0.0 : std::sin(pi * (t - t0) / (D - t0));
      w[k] = s * s;
    }
  }
  return w;
}

namespace {

SpectrumMeta meta_for(const FieldConfig& cfg, std::string mode) {
  SpectrumMeta m;
  m.mode = std::move(mode);
  m.phi = cfg.phi;
  m.epsilon = cfg.epsilon;
  m.envelope = to_string(cfg.envelope_shape);
  return m;
}

}  // namespace

SpectrumTable hhg_spectrum(const TimeDipole& dip, const FieldConfig& cfg, const Numerics& num) {
  const int n = static_cast<int>(dip.d.size());
  if (n < 2) throw ConfigError("invalid dipole: need at least 2 samples");
  const real dt = dip.t[1] - dip.t[0];
  const int nfft = n * std::max(1, num.zero_pad);
  const vec w = spectral_window(dip, cfg, num);

  std::vector<cplx> in(nfft, cplx{}), spec;
  for (int k = 0; k < n; ++k) in[k] = dip.d[k].real() * w[k];
  Eigen::FFT<real> fft;
  fft.fwd(spec, in);

  SpectrumTable s;
  const int nk = nfft / 2 + 1;
  s.omega.resize(nk);
  s.amplitude.resize(nk);
  s.intensity.resize(nk);
  const real df = two_pi / (nfft * dt) / cfg.omega;
  for (int j = 0; j < nk; ++j) {
    s.omega[j] = j * df;
    // the forward transform uses e^{-iωt}; the physical amplitude uses e^{+iωt}
    s.amplitude[j] = dt * std::conj(spec[j]);
    s.intensity[j] = std::norm(s.amplitude[j]);
  }
  s.meta = meta_for(cfg, "time_domain");
  s.meta.n_time = n;
  s.meta.n_fft = nfft;
  s.meta.pole_hits = dip.pole_hits;
  return s;
}

cplx harmonic_sum(const TimeDipole& dip, const FieldConfig& cfg, const Numerics& num, real q) {
  const vec w = spectral_window(dip, cfg, num);
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < dip.d.size(); ++k)
    acc += dip.d[k].real() * w[k] * std::exp(I * q * cfg.omega * dip.t[k]);
  return acc;
}

SpectrumTable compute_spectrum(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                               int threads) {
  const FieldConfig c = validated(cfg);
  const TwoColorField f(c);
  const auto dip = time_dipole(f, atom, num, TimeGrid::for_pulse(c, num.points_per_cycle), threads);
  return hhg_spectrum(dip, c, num);
}

// ---------------------------------------------------------------------------
// saddle-point reconstruction

SpectrumTable spectrum_saddle(const FieldConfig& cfg_in, const AtomConfig& atom, const Numerics& num,
                              const std::vector<real>& qs, SaddleMode mode) {
  if (mode == SaddleMode::squeezed) throw ConfigError("invalid mode: spectrum_saddle takes classical modes");
  if (!std::is_sorted(qs.begin(), qs.end())) throw ConfigError("invalid q_range: must be increasing");
  const FieldConfig cfg = validated(cfg_in);
  const TwoColorField f(cfg);
  const DipoleModel dm(atom, num.pole_guard);
  const real q_cut = (atom.Ip + 3.17 * ponderomotive_energy(cfg)) / cfg.omega;
  const bool fano_factor = mode == SaddleMode::sigma_phi && atom.fano.has_value();
  const auto all = solve_saddles(cfg, atom, num, qs, mode);

  SpectrumTable s;
  s.meta = meta_for(cfg, to_string(mode));
  s.meta.n_time = static_cast<int>(qs.size());
  std::map<std::string, cplx> root_track;

  for (std::size_t i = 0; i < qs.size(); ++i) {
    const real q = qs[i];
    const SaddleSystem sys(f, atom, num, q, mode);
    struct Term {
      cplx amp;
      real growth;  // Im Ψ, |e^{-iΨ}| = e^{Im Ψ}
      BranchLabel label;
    };
    std::vector<Term> terms;
    for (const auto& sol : all[i]) {
      if (sol.traj_class != TrajectoryClass::short_path && sol.traj_class != TrajectoryClass::long_path) continue;
      const cvec z = to_vector(sol);
      const cplx p = sol.p_s, t1 = sol.t_ion, t = sol.t_re;
      try {
        const cplx v1 = p + f.a_w(t1), v = p + f.a_w(t);
        const cplx drive = mode == SaddleMode::bare ? f.e_w(t1) : f.e_w(t1) + f.e_2w(t1);
        // √det(iH) as the product of principal eigenvalue roots: the Fresnel
        // phases e^{±iπ/4} of a nearly real Hessian come out right
        const Eigen::ComplexEigenSolver<matrix<cplx>> es(I * sys.hessian(z), false);
        cplx root = 1.0;
        for (const cplx& lam : es.eigenvalues()) root *= std::sqrt(lam);
        auto [it, fresh] = root_track.try_emplace(sol.branch.str(), root);
        if (!fresh) {
          if (std::abs(root + it->second) < std::abs(root - it->second)) root = -root;
          it->second = root;
        }
        const cplx psi = sys.phase(z);
        cplx amp = I * drive * dm.ionization_value(v1) * dm.value(v) * std::pow(two_pi, 1.5) / root *
                   (two_pi / (I * (t - t1))) * std::pow(2.0, 1.5) * std::exp(-I * psi);
        if (fano_factor) amp *= std::exp(-I * sys.action().phi(p, t1, t));
        terms.push_back({amp, psi.imag(), sol.branch});
      } catch (const PoleProximity&) {
        ++s.meta.pole_hits;
      }
    }
    if (q > q_cut) {
      // past the cutoff only the decaying member of each pair is physical
      std::vector<Term> kept;
      for (const auto& tm : terms) {
        bool keep = true;
        for (const auto& other : terms)
          if (other.label.half_cycle == tm.label.half_cycle && other.label.is_long != tm.label.is_long &&
              other.growth < tm.growth)
            keep = false;
        if (keep) kept.push_back(tm);
      }
      terms = std::move(kept);
    }
    cplx cycle = 0.0;
    for (const auto& tm : terms) cycle += tm.amp;
    if (terms.empty()) s.meta.flagged.push_back(q);
    cplx comb = 0.0;
    for (int c = 0; c < cfg.n_cycles; ++c) comb += std::exp(I * two_pi * q * real(c));
    s.omega.push_back(q);
    s.amplitude.push_back(cycle * comb);
    s.intensity.push_back(std::norm(s.amplitude.back()));
  }
  return s;
}

// ---------------------------------------------------------------------------
// phase maps

namespace {

const SaddleSolution* pick_branch(const std::vector<SaddleSolution>& sols, const BranchLabel& label) {
  for (const auto& s : sols)
    if (s.branch == label && (s.traj_class == TrajectoryClass::short_path || s.traj_class == TrajectoryClass::long_path))
      return &s;
  return nullptr;
}

}  // namespace

PhaseMap phase_map(const FieldConfig& cfg, const AtomConfig& atom, const Numerics& num,
                   const std::vector<real>& qs, const std::vector<real>& phis, int threads,
                   const std::optional<SqueezeConfig>& squeeze) {
  const int nq = static_cast<int>(qs.size()), np = static_cast<int>(phis.size());
  PhaseMap pm;
  pm.q_grid = qs;
  pm.phi_grid = phis;
  pm.re_sigma = mat::Constant(np, nq, NAN);
  pm.im_sigma = pm.re_sigma;
  pm.re_sigma_phi = pm.re_sigma;
  pm.im_sigma_phi = pm.re_sigma;
  pm.converged.assign(np, std::vector<bool>(nq, false));
  const BranchLabel label{0, false};
  const bool fano = atom.fano.has_value();

  parallel_for(np, threads, [&](std::size_t ip) {
    FieldConfig c = cfg;
    c.phi = phis[ip];
    c = validated(c);
    const TwoColorField f(c);
    const Action act(f, atom, num.second_order, num.pole_guard);
    std::vector<std::vector<SaddleSolution>> sig, sph;
    try {
      sig = solve_saddles(c, atom, num, qs, SaddleMode::sigma);
      if (squeeze)
        sph = solve_saddles(c, atom, num, qs, SaddleMode::squeezed, squeeze);
      else if (!fano)
        sph = solve_saddles(c, atom, num, qs, SaddleMode::sigma_phi);
    } catch (const NonConvergence&) {
      return;
    }
    for (int iq = 0; iq < nq; ++iq) {
      const auto* s = pick_branch(sig[iq], label);
      const auto* w = fano && !squeeze ? s : pick_branch(sph[iq], label);
      if (!s || !w) continue;
      try {
        const cplx sg = act.sigma(s->p_s, s->t_ion, s->t_re);
        cplx sp;
        if (squeeze) {
          const Action at(f.with_axis_amplitude(squeeze->axis, *w->eps_s), atom, true, num.pole_guard);
          sp = at.sigma(w->p_s, w->t_ion, w->t_re) + at.phi(w->p_s, w->t_ion, w->t_re);
        } else {
          sp = act.sigma(w->p_s, w->t_ion, w->t_re) + act.phi(w->p_s, w->t_ion, w->t_re);
        }
        pm.re_sigma(ip, iq) = sg.real();
        pm.im_sigma(ip, iq) = sg.imag();
        pm.re_sigma_phi(ip, iq) = sp.real();
        pm.im_sigma_phi(ip, iq) = sp.imag();
        pm.converged[ip][iq] = true;
      } catch (const PoleProximity&) {
      }
    }
  });
  return pm;
}

// ---------------------------------------------------------------------------
// squeezed drivers

std::shared_ptr<const SpectrumTable> NodeCache::find(cplx x, cplx y) const {
  std::lock_guard lock(mutex_);
  auto it = store_.find({x.real(), x.imag(), y.real(), y.imag()});
  return it == store_.end() ? nullptr : it->second;
}

std::shared_ptr<const SpectrumTable> NodeCache::insert(cplx x, cplx y, SpectrumTable table) {
  auto ptr = std::make_shared<const SpectrumTable>(std::move(table));
  std::lock_guard lock(mutex_);
  // first writer wins; later inserts of the same node return the stored table
  return store_.try_emplace({x.real(), x.imag(), y.real(), y.imag()}, std::move(ptr)).first->second;
}

std::size_t NodeCache::size() const {
  std::lock_guard lock(mutex_);
  return store_.size();
}

std::vector<SqueezedNode> squeezed_nodes(const FieldConfig& cfg_in, const AtomConfig& atom,
                                         const SqueezeConfig& squeeze, const Numerics& num, NodeCache& cache,
                                         int threads) {
  validate(squeeze);
  const FieldConfig cfg = validated(cfg_in);
  const TwoColorField mean(cfg);
  const real ebar = mean.axis_amplitude(squeeze.axis).real();
  const auto rule = gaussian_average(ebar, squeeze.varsigma(), num.nodes);
  const TimeGrid grid = TimeGrid::for_pulse(cfg, num.points_per_cycle);

  std::vector<SqueezedNode> nodes(rule.nodes.size());
  // nodes run one at a time when there are few of them; otherwise inner loops stay serial
  const int outer = rule.nodes.size() > 1 ? threads : 1;
  const int inner = rule.nodes.size() > 1 ? 1 : threads;
  parallel_for(rule.nodes.size(), outer, [&](std::size_t k) {
    const TwoColorField f = mean.with_axis_amplitude(squeeze.axis, rule.nodes[k]);
    nodes[k].weight = rule.weights[k];
    nodes[k].eps = rule.nodes[k];
    auto hit = cache.find(f.quad_x(), f.quad_y());
    if (!hit) {
      FieldConfig c = cfg;
      auto table = hhg_spectrum(time_dipole(f, atom, num, grid, inner), c, num);
      hit = cache.insert(f.quad_x(), f.quad_y(), std::move(table));
    }
    nodes[k].spectrum = hit;
  });
  return nodes;
}

SpectrumTable squeezed_spectrum(const FieldConfig& cfg_in, const AtomConfig& atom, const SqueezeConfig& squeeze,
                                const Numerics& num, NodeCache& cache, int threads) {
  const FieldConfig cfg = validated(cfg_in);
  const auto nodes = squeezed_nodes(cfg, atom, squeeze, num, cache, threads);
  const auto& first = *nodes.front().spectrum;
  const std::size_t n = first.size();

  SpectrumTable s;
  s.omega = first.omega;
  s.amplitude.assign(n, cplx{});
  s.intensity.assign(n, 0.0);
  std::vector<real> mean_intensity(n, 0.0);
  for (const auto& nd : nodes) {
    for (std::size_t j = 0; j < n; ++j) {
      s.amplitude[j] += nd.weight * nd.spectrum->amplitude[j];
      mean_intensity[j] += nd.weight * nd.spectrum->intensity[j];
    }
    s.meta.pole_hits += nd.spectrum->meta.pole_hits;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (num.squeeze_average == SqueezeAverage::intensity) {
      // keep the averaged phase, carry the averaged intensity in the modulus
      const real r = std::abs(s.amplitude[j]);
      const cplx phase = r > 0.0 ? s.amplitude[j] / r : cplx{1.0, 0.0};
      s.amplitude[j] = std::sqrt(mean_intensity[j]) * phase;
    }
    s.intensity[j] = std::norm(s.amplitude[j]);
  }
  s.meta = first.meta;
  s.meta.mode = "squeezed_" + to_string(num.squeeze_average);
  s.meta.phi = cfg.phi;
  s.meta.epsilon = cfg.epsilon;
  s.meta.I_squ = squeeze.I_squ;
  return s;
}

real cutoff_order(const SpectrumTable& s, real q_lo, real q_max, int parity_step) {
  std::vector<real> orders, peaks;
  for (real q = q_lo; q <= q_max + 1e-9; q += parity_step) {
    orders.push_back(q);
    peaks.push_back(s.peak(q));
  }
  if (orders.empty()) throw ConfigError("invalid cutoff window: empty");
  const std::size_t nref = std::min<std::size_t>(peaks.size(), 5);
  std::vector<real> ref(peaks.begin(), peaks.begin() + nref);
  std::nth_element(ref.begin(), ref.begin() + nref / 2, ref.end());
  const real level = ref[nref / 2] / 10.0;
  real cut = orders.front();
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (peaks[i] >= level) cut = orders[i];
  return cut;
}

}  // namespace hhgwm
