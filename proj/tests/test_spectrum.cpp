#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hhgwm/errors.hpp"
#include "hhgwm/quadrature.hpp"
#include "hhgwm/spectrum.hpp"

using namespace hhgwm;

namespace {

const AtomConfig helium{0.9, 0.72, std::nullopt};

// short flat pulses on a coarse grid keep these tests fast
FieldConfig small_flat(real eps, real phi) {
  FieldConfig c;
  c.envelope_shape = Envelope::flat;
  c.n_cycles = 4;
  c.epsilon = eps;
  c.phi = phi;
  return c;
}

Numerics coarse() {
  Numerics n;
  n.points_per_cycle = 256;
  return n;
}

}  // namespace

TEST_CASE("Gauss-Hermite rules") {
  const auto r = gauss_hermite(41);
  real total = 0.0;
  for (real w : r.weights) total += w;
  CHECK(total == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  for (int k = 0; k < 41; ++k) CHECK(r.nodes[k] == doctest::Approx(-r.nodes[40 - k]).epsilon(1e-12));

  const real m = 0.3, v = 0.5;
  const auto g = gaussian_average(m, v, 41);
  real s = 0.0, m2 = 0.0, m4 = 0.0, ef = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const real x = g.nodes[k];
    s += g.weights[k];
    m2 += g.weights[k] * x * x;
    m4 += g.weights[k] * x * x * x * x;
    ef += g.weights[k] * std::exp(std::sin(x));
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m2 == doctest::Approx(m * m + v).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(m * m * m * m + 6 * m * m * v + 3 * v * v).epsilon(1e-13));
  // a smooth non-polynomial average against adaptive quadrature
  auto dens = [&](real x) { return std::exp(std::sin(x)) * std::exp(-(x - m) * (x - m) / (2 * v)) / std::sqrt(two_pi * v); };
  const real ref = boost::math::quadrature::gauss_kronrod<real, 61>::integrate(dens, m - 12.0, m + 12.0, 15, 1e-14);
  CHECK(ef == doctest::Approx(ref).epsilon(1e-12));

  const auto one = gaussian_average(0.7, 0.0, 41);
  CHECK(one.nodes.size() == 1);
  CHECK(one.weights[0] == 1.0);
  CHECK_THROWS_AS(gauss_hermite(0), ConfigError);
}

TEST_CASE("time-domain dipole is real and the transform obeys Parseval") {
  const FieldConfig cfg = small_flat(0.01, 0.4);
  const Numerics num = coarse();
  const TimeGrid grid = TimeGrid::for_pulse(cfg, num.points_per_cycle);
  CHECK(grid.n == 4 * 256);
  CHECK(grid.dt == doctest::Approx(cfg.period() / 256));
  const auto dip = time_dipole(TwoColorField(cfg), helium, num, grid, 2);
  CHECK(dip.pole_hits == 0);
  const real scale = dip.d.cwiseAbs().maxCoeff();
  CHECK(scale > 0.0);
  CHECK(dip.d.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale);
  // the dipole starts at zero: no excursion has happened yet
  CHECK(std::abs(dip.d[0]) == 0.0);

  // Parseval on the full zero-padded transform of the windowed signal
  const auto s = hhg_spectrum(dip, cfg, num);
  const std::size_t nfft = static_cast<std::size_t>(s.meta.n_fft);
  CHECK(s.size() == nfft / 2 + 1);
  real lhs = s.intensity.front() + s.intensity.back();
  for (std::size_t j = 1; j + 1 < s.size(); ++j) lhs += 2.0 * s.intensity[j];
  const vec w = spectral_window(dip, cfg, num);
  real rhs = 0.0;
  for (int k = 0; k < grid.n; ++k) rhs += std::pow(dip.d[k].real() * w[k], 2);
  rhs *= nfft * grid.dt * grid.dt;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("harmonic sum matches the table at integer orders") {
  const FieldConfig cfg = small_flat(0.01, 1.0);
  const Numerics num = coarse();
  const TimeGrid grid = TimeGrid::for_pulse(cfg, num.points_per_cycle);
  const auto dip = time_dipole(TwoColorField(cfg), helium, num, grid, 2);
  const auto s = hhg_spectrum(dip, cfg, num);
  for (real q : {11.0, 12.0, 21.0}) {
    const std::size_t j = s.index_of(q);
    CHECK(s.omega[j] == doctest::Approx(q).epsilon(1e-12));
    const cplx a = harmonic_sum(dip, cfg, num, q) * grid.dt;
    CHECK(std::abs(a - s.amplitude[j]) <= 1e-9 * std::abs(s.amplitude[j]));
  }
}

TEST_CASE("flat single-color pulse has no even harmonics") {
  const FieldConfig cfg = small_flat(0.0, 0.0);
  const auto s = compute_spectrum(cfg, helium, coarse(), 2);
  for (int q = 12; q <= 24; q += 2) {
    const real odd = 0.5 * (s.intensity[s.index_of(q - 1)] + s.intensity[s.index_of(q + 1)]);
    CHECK(s.intensity[s.index_of(q)] < 1e-10 * odd);
  }
}

TEST_CASE("even harmonics scale with the square of the 2w amplitude") {
  const auto a = compute_spectrum(small_flat(1e-3, 0.0), helium, coarse(), 2);
  const auto b = compute_spectrum(small_flat(1e-2, 0.0), helium, coarse(), 2);
  for (int q : {14, 18, 22}) {
    const real slope = std::log10(b.intensity[b.index_of(q)] / a.intensity[a.index_of(q)]);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("phi-periodicity of the spectrum") {
  const auto a = compute_spectrum(small_flat(0.01, 0.8), helium, coarse(), 2);
  const auto b = compute_spectrum(small_flat(0.01, 0.8 + two_pi), helium, coarse(), 2);
  for (int q = 11; q <= 30; ++q) {
    const std::size_t j = a.index_of(q);
    CHECK(a.intensity[j] == doctest::Approx(b.intensity[j]).epsilon(1e-9));
  }
}

TEST_CASE("exponentiated and linear weak-value forms agree to first order") {
  Numerics lin = coarse(), ex = coarse();
  ex.weak_value_form = WeakValueForm::exponential;
  const FieldConfig cfg = small_flat(1e-3, 0.0);
  const auto a = compute_spectrum(cfg, helium, lin, 2);
  const auto b = compute_spectrum(cfg, helium, ex, 2);
  for (int q = 11; q <= 23; q += 2) {
    const std::size_t j = a.index_of(q);
    CHECK(b.intensity[j] == doctest::Approx(a.intensity[j]).epsilon(0.02));
  }
}

TEST_CASE("squeezed average: zero squeezing is deterministic, weights and cache behave") {
  const FieldConfig cfg = small_flat(0.01, 0.5);
  const Numerics num = coarse();
  NodeCache cache;
  const auto det = compute_spectrum(cfg, helium, num, 2);
  const auto sq0 = squeezed_spectrum(cfg, helium, SqueezeConfig{0.0, SqueezeAxis::x}, num, cache, 2);
  REQUIRE(det.size() == sq0.size());
  for (std::size_t j = 0; j < det.size(); j += 37) CHECK(std::abs(det.amplitude[j] - sq0.amplitude[j]) <= 1e-15 * std::abs(det.amplitude[j]) + 1e-300);
  CHECK(cache.size() == 1);

  Numerics small = num;
  small.nodes = 9;
  const auto nodes = squeezed_nodes(cfg, helium, SqueezeConfig{1e-6, SqueezeAxis::x}, small, cache, 2);
  real total = 0.0;
  for (const auto& n : nodes) total += n.weight;
  CHECK(nodes.size() == 9);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  const std::size_t filled = cache.size();
  squeezed_nodes(cfg, helium, SqueezeConfig{1e-6, SqueezeAxis::x}, small, cache, 2);
  CHECK(cache.size() == filled);
  CHECK(filled >= 9);
  CHECK(filled <= 10);
}

TEST_CASE("squeezed average converges in the node count") {
  const FieldConfig cfg = small_flat(0.01, 0.0);
  const SqueezeConfig sq{1e-6, SqueezeAxis::x};
  Numerics a = coarse(), b = coarse();
  a.nodes = 41;
  b.nodes = 61;
  NodeCache ca, cb;
  const auto sa = squeezed_spectrum(cfg, helium, sq, a, ca, 2);
  const auto sb = squeezed_spectrum(cfg, helium, sq, b, cb, 2);
  for (int q = 11; q <= 24; ++q) {
    const std::size_t j = sa.index_of(q);
    CHECK(sa.intensity[j] == doctest::Approx(sb.intensity[j]).epsilon(1e-4));
  }
}

TEST_CASE("saddle spectrum peaks sit on integer orders") {
  const FieldConfig cfg = small_flat(0.0, 0.0);
  std::vector<real> qs;
  for (real q = 15.0; q <= 23.0 + 1e-9; q += 0.25) qs.push_back(q);
  const auto s = spectrum_saddle(cfg, helium, Numerics{}, qs, SaddleMode::bare);
  for (real q : {17.0, 19.0, 21.0}) {
    CHECK(s.intensity[s.index_of(q)] > 100.0 * s.intensity[s.index_of(q + 0.5)]);
    CHECK(s.intensity[s.index_of(q)] > 100.0 * s.intensity[s.index_of(q - 0.5)]);
  }
  // the comb cancels even orders in the bare single-color case
  CHECK(s.intensity[s.index_of(20.0)] < 1e-8 * s.intensity[s.index_of(21.0)]);
}

TEST_CASE("cutoff finder on a synthetic table") {
  SpectrumTable s;
  for (int j = 0; j <= 80 * 4; ++j) {
    const real q = j / 4.0;
    s.omega.push_back(q);
    const real level = q <= 27.0 ? 1.0 : 1e-4;
    s.amplitude.push_back(std::sqrt(level));
    s.intensity.push_back(level);
  }
  CHECK(cutoff_order(s, 11.0, 45.0) == doctest::Approx(27.0));
  CHECK(s.peak(21.0) == 1.0);
}

TEST_CASE("phase map is periodic in phi") {
  const FieldConfig cfg = small_flat(0.01, 0.0);
  const auto m = phase_map(cfg, helium, Numerics{}, {17.0, 21.0}, {0.9, 0.9 + two_pi}, 1);
  for (int j = 0; j < 2; ++j) {
    CHECK(m.re_sigma(0, j) == doctest::Approx(m.re_sigma(1, j)).epsilon(1e-10));
    CHECK(m.im_sigma_phi(0, j) == doctest::Approx(m.im_sigma_phi(1, j)).epsilon(1e-10));
  }
}

TEST_CASE("squeezed phase map is periodic and linear in weak squeezing") {
  const FieldConfig cfg = small_flat(0.01, 0.0);
  const std::vector<real> qs{17.0, 21.0}, phis{0.9, 0.9 + two_pi};
  auto at = [&](real I_squ) { return phase_map(cfg, helium, Numerics{}, qs, phis, 1, SqueezeConfig{I_squ, SqueezeAxis::x}); };
  const auto a = at(1e-10), b = at(1e-11), c = at(1e-14);
  for (int j = 0; j < 2; ++j) {
    REQUIRE(a.converged[0][j]);
    CHECK(a.re_sigma_phi(0, j) == doctest::Approx(a.re_sigma_phi(1, j)).epsilon(1e-10));
    const cplx da{a.re_sigma_phi(0, j) - c.re_sigma_phi(0, j), a.im_sigma_phi(0, j) - c.im_sigma_phi(0, j)};
    const cplx db{b.re_sigma_phi(0, j) - c.re_sigma_phi(0, j), b.im_sigma_phi(0, j) - c.im_sigma_phi(0, j)};
    CHECK(std::abs(da / db - 10.0) < 0.1);
    // the sigma columns do not depend on the squeezing
    CHECK(a.re_sigma(0, j) == c.re_sigma(0, j));
  }
}
