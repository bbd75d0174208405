#include "hhgwm/quantum_optics.hpp"

#include <algorithm>
#include <cmath>

#include "hhgwm/errors.hpp"
#include "hhgwm/parallel.hpp"

namespace hhgwm {

namespace {

// W of a coherent state is a Gaussian of this width per quadrature
constexpr real coherent_width = 0.5;

// outer nodes with at most this much weight in total are left off the grid
constexpr real tail_weight = 1e-6;

// Riemann sums of a width-0.5 Gaussian are exact to ~1e-8 at this spacing
constexpr real max_spacing = 0.5;

cplx mean_chi(const HarmonicEnsemble& ens) {
  cplx m = 0.0;
  for (const auto& n : ens.nodes) m += n.weight * n.chi;
  return m;
}

}  // namespace

void validate(const HarmonicEnsemble& ens) {
  if (ens.nodes.empty()) throw ConfigError("invalid ensemble: no nodes");
  real total = 0.0;
  for (const auto& n : ens.nodes) {
    if (!(n.weight >= 0.0)) throw ConfigError("invalid weight: must satisfy >= 0");
    total += n.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("invalid weights: must sum to 1");
}

HarmonicEnsemble ensemble_from_nodes(const std::vector<SqueezedNode>& nodes, const FieldConfig& cfg,
                                     const SqueezeConfig& squeeze, real q, real kappa) {
  if (nodes.empty()) throw ConfigError("invalid ensemble: no nodes");
  const auto& ref = *nodes.front().spectrum;
  const std::size_t j = ref.index_of(q);
  if (std::abs(ref.omega[j] - q) > 1e-9)
    throw ConfigError("invalid q: not on the spectral grid");
  HarmonicEnsemble ens;
  ens.q = q;
  ens.kappa = kappa;
  ens.phi = cfg.phi;
  ens.I_squ = squeeze.I_squ;
  ens.axis = squeeze.axis;
  for (const auto& n : nodes)
    ens.nodes.push_back({n.weight, kappa * std::sqrt(q) * n.spectrum->amplitude[j], n.eps.real()});
  return ens;
}

HarmonicEnsemble build_ensemble(const FieldConfig& cfg, const AtomConfig& atom, const SqueezeConfig& squeeze,
                                const Numerics& num, real q, real kappa, NodeCache& cache, int threads) {
  const auto nodes = squeezed_nodes(cfg, atom, squeeze, num, cache, threads);
  return ensemble_from_nodes(nodes, cfg, squeeze, q, kappa);
}

std::vector<bool> covered_nodes(const HarmonicEnsemble& ens) {
  validate(ens);
  const cplx m1 = mean_chi(ens);
  std::vector<std::size_t> order(ens.nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(ens.nodes[a].chi - m1) > std::abs(ens.nodes[b].chi - m1);
  });
  // drop the outermost nodes while their combined weight stays negligible
  std::vector<bool> in(ens.nodes.size(), true);
  real dropped = 0.0;
  for (std::size_t k : order) {
    if (dropped + ens.nodes[k].weight > tail_weight) break;
    dropped += ens.nodes[k].weight;
    in[k] = false;
  }
  return in;
}

PhaseSpaceGrid default_grid(const HarmonicEnsemble& ens, int points) {
  const auto in = covered_nodes(ens);
  const cplx c = mean_chi(ens);
  real radius = 0.0;
  for (std::size_t k = 0; k < in.size(); ++k)
    if (in[k]) radius = std::max(radius, std::abs(ens.nodes[k].chi - c));
  const real half = std::max(4.0 * coherent_width, radius + 4.0);
  const int needed = static_cast<int>(std::ceil(2.0 * half / max_spacing)) + 1;
  const int n = std::max(points, needed);
  return {c.real() - half, c.real() + half, c.imag() - half, c.imag() + half, n, n};
}

mat wigner(const HarmonicEnsemble& ens, const PhaseSpaceGrid& g, bool normalize) {
  validate(ens);
  if (g.nx < 2 || g.ny < 2 || !(g.x1 > g.x0) || !(g.y1 > g.y0))
    throw ConfigError("invalid grid: needs at least 2x2 points and positive extent");
  const real margin = 4.0 * coherent_width;
  const auto in = covered_nodes(ens);
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (!in[k]) continue;
    const auto& n = ens.nodes[k];
    if (n.chi.real() - margin < g.x0 || n.chi.real() + margin > g.x1 || n.chi.imag() - margin < g.y0 ||
        n.chi.imag() + margin > g.y1)
      throw GridTooSmall("grid does not cover the node at chi = (" + std::to_string(n.chi.real()) + ", " +
                         std::to_string(n.chi.imag()) + ")");
  }

  mat W = mat::Zero(g.ny, g.nx);
  const real norm = 2.0 / pi;
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (!in[k]) continue;
    const auto& n = ens.nodes[k];
    // separable Gaussian: e^{-2|γ-χ|²} = e^{-2(x-a)²} e^{-2(y-b)²}
    vec ex(g.nx), ey(g.ny);
    for (int i = 0; i < g.nx; ++i) ex[i] = std::exp(-2.0 * std::pow(g.x(i) - n.chi.real(), 2));
    for (int j = 0; j < g.ny; ++j) ey[j] = std::exp(-2.0 * std::pow(g.y(j) - n.chi.imag(), 2));
    W.noalias() += (n.weight * norm) * ey * ex.transpose();
  }
  W = W.unaryExpr([](real v) { return std::abs(v) < 1e-30 ? 0.0 : v; });
  if (normalize && W.maxCoeff() > 0.0) W /= W.maxCoeff();
  return W;
}

QOObservables quadrature_variances(const HarmonicEnsemble& ens) {
  validate(ens);
  // centred moments avoid cancelling |χ|² against |⟨χ⟩|² for bright modes
  const cplx m1 = mean_chi(ens);
  real spread = 0.0;
  cplx c2 = 0.0;
  for (const auto& n : ens.nodes) {
    const cplx d = n.chi - m1;
    spread += n.weight * std::norm(d);
    c2 += n.weight * d * d;
  }
  QOObservables o;
  o.var_min = 0.5 + spread - std::abs(c2);
  o.var_max = 0.5 + spread + std::abs(c2);
  // Var X_θ = 1/2 + spread + Re(e^{-2iθ} c2)
  o.theta_max = 0.5 * std::arg(c2);
  o.theta_min = o.theta_max + 0.5 * pi;
  if (o.theta_min > 0.5 * pi) o.theta_min -= pi;
  o.mean_photons = spread + std::norm(m1);
  return o;
}

real g2_zero(const HarmonicEnsemble& ens, real guard) {
  validate(ens);
  real n1 = 0.0, n2 = 0.0;
  for (const auto& n : ens.nodes) {
    const real p = std::norm(n.chi);
    n1 += n.weight * p;
    n2 += n.weight * p * p;
  }
  if (!(n1 > guard)) throw ZeroIntensity("mean photon number is zero");
  return n2 / (n1 * n1);
}

QOObservables observables(const HarmonicEnsemble& ens) {
  QOObservables o = quadrature_variances(ens);
  o.g2 = g2_zero(ens);
  return o;
}

std::vector<ObservableRow> observables_sweep(const FieldConfig& cfg, const AtomConfig& atom,
                                             const SqueezeConfig& squeeze, const Numerics& num,
                                             const std::vector<real>& qs, const std::vector<real>& phis,
                                             real kappa, int threads) {
  std::vector<ObservableRow> rows;
  NodeCache cache;
  for (real phi : phis) {
    FieldConfig c = cfg;
    c.phi = phi;
    const auto nodes = squeezed_nodes(c, atom, squeeze, num, cache, threads);
    for (real q : qs) {
      ObservableRow row{q, phi, {}, true};
      const auto ens = ensemble_from_nodes(nodes, c, squeeze, q, kappa);
      row.obs = quadrature_variances(ens);
      try {
        row.obs.g2 = g2_zero(ens);
      } catch (const ZeroIntensity&) {
        row.obs.g2 = std::nan("");
        row.ok = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace hhgwm
