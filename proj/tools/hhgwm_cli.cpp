// hhgwm: command-line driver. Every subcommand writes CSV into --out, an SVG
// view with --plot, and a JSON sidecar with the resolved configuration.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhgwm/errors.hpp"
#include "hhgwm/io.hpp"
#include "hhgwm/parallel.hpp"
#include "hhgwm/quantum_optics.hpp"
#include "hhgwm/saddle.hpp"
#include "hhgwm/spectrum.hpp"

namespace fs = std::filesystem;
using namespace hhgwm;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  bool plot = false;
  int threads = 0;
  std::string mode = "sigma";
  std::string phi_list;
  std::string q_range;
  int nodes = 0;
};

std::vector<real> parse_list(const std::string& s) {
  std::vector<real> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    // "pi" multiples are convenient on the command line: 0.5pi, pi
    const auto p = item.find("pi");
    try {
      if (p == std::string::npos) {
        out.push_back(std::stod(item));
      } else {
        const std::string head = item.substr(0, p);
        out.push_back((head.empty() ? 1.0 : head == "-" ? -1.0 : std::stod(head)) * pi);
      }
    } catch (const std::exception&) {
      throw ConfigError("invalid list entry: '" + item + "'");
    }
  }
  return out;
}

std::vector<real> parse_range(const std::string& s, real step) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("invalid q-range: expected A:B");
  real a, b;
  try {
    a = std::stod(s.substr(0, colon));
    b = std::stod(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("invalid q-range: expected A:B");
  }
  if (!(b >= a)) throw ConfigError("invalid q-range: must satisfy A <= B");
  std::vector<real> qs;
  for (real q = a; q <= b + 1e-9; q += step) qs.push_back(q);
  return qs;
}

std::vector<real> default_phis(int n) {
  std::vector<real> v;
  for (int i = 0; i < n; ++i) v.push_back(two_pi * i / n);
  return v;
}

class Run {
 public:
  Run(std::string command, const Common& c, int argc, char** argv)
      : command_(std::move(command)), c_(c), start_(std::chrono::steady_clock::now()) {
    for (int i = 1; i < argc; ++i) args_.emplace_back(argv[i]);
    cfg_ = c.config_path.empty() ? load_config("{}") : load_config(read_text(c.config_path));
    for (const auto& kv : c.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("invalid override '" + kv + "': expected KEY=VALUE");
      apply_override(cfg_, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.nodes > 0) apply_override(cfg_, "nodes", std::to_string(c.nodes));
    threads_ = c.threads > 0 ? c.threads : default_threads();
    fs::create_directories(c.out_dir);
  }

  RunConfig& cfg() { return cfg_; }
  int threads() const { return threads_; }
  const Common& opts() const { return c_; }

  std::vector<real> phis(std::vector<real> fallback) const {
    return c_.phi_list.empty() ? fallback : parse_list(c_.phi_list);
  }
  std::vector<real> qs(const std::string& fallback, real step = 1.0) const {
    return parse_range(c_.q_range.empty() ? fallback : c_.q_range, step);
  }

  void csv(const std::string& name, const CsvTable& t) {
    write_text(path(name + ".csv"), to_csv(t));
    written_.push_back(name + ".csv");
  }
  void svg(const std::string& name, const std::string& body) {
    if (!c_.plot) return;
    write_text(path(name + ".svg"), body);
    written_.push_back(name + ".svg");
  }

  void finish() {
    const real wall = std::chrono::duration<real>(std::chrono::steady_clock::now() - start_).count();
    write_text(path(command_ + ".json"), sidecar_json(command_, cfg_, args_, wall));
    for (const auto& f : written_) std::cout << path(f) << "\n";
  }

 private:
  std::string path(const std::string& f) const { return (fs::path(c_.out_dir) / f).string(); }

  std::string command_;
  Common c_;
  RunConfig cfg_;
  int threads_ = 1;
  std::vector<std::string> args_;
  std::vector<std::string> written_;
  std::chrono::steady_clock::time_point start_;
};

std::string phi_tag(real phi) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", phi);
  return buf;
}

// ---------------------------------------------------------------------------

SqueezeConfig squeeze_of(RunConfig& cfg) {
  if (!cfg.squeeze) cfg.squeeze = SqueezeConfig{};
  return *cfg.squeeze;
}

void cmd_trajectories(Run& run) {
  auto& cfg = run.cfg();
  const auto qs = run.qs("11:25");
  const auto phis = run.phis({cfg.field.phi});
  std::vector<SaddleMode> modes;
  std::optional<SqueezeConfig> sq;
  if (run.opts().mode == "all") {
    modes = {SaddleMode::bare, SaddleMode::sigma, SaddleMode::sigma_phi};
  } else {
    std::stringstream ss(run.opts().mode);
    for (std::string m; std::getline(ss, m, ',');) modes.push_back(parse_mode(m));
  }
  if (std::find(modes.begin(), modes.end(), SaddleMode::squeezed) != modes.end()) sq = squeeze_of(cfg);

  CsvTable traj;
  for (real phi : phis) {
    FieldConfig f = cfg.field;
    f.phi = phi;
    for (auto m : modes) {
      const auto per_q = solve_saddles(f, cfg.atom, cfg.numerics, qs, m, sq);
      for (const auto& sols : per_q) {
        auto t = trajectories_csv(sols, phi);
        if (traj.header.empty()) traj.header = t.header;
        for (auto& r : t.rows) traj.rows.push_back(std::move(r));
      }
    }
  }
  if (traj.header.empty()) traj = trajectories_csv({}, 0.0);
  run.csv("trajectories", traj);

  const auto rows = excursion_table(cfg.field, cfg.atom, cfg.numerics, qs, modes, phis, run.threads(), sq);
  run.csv("excursion", excursion_csv(rows));

  std::vector<Series> series;
  for (real phi : phis)
    for (auto m : modes)
      for (bool is_long : {false, true}) {
        Series s{to_string(m) + (is_long ? " long" : " short") + " phi=" + phi_tag(phi), {}, {}};
        for (const auto& r : rows)
          if (r.mode == m && r.phi == phi && r.branch.half_cycle == 0 && r.branch.is_long == is_long &&
              r.converged) {
            s.x.push_back(r.q);
            s.y.push_back(r.excursion);
          }
        if (!s.x.empty()) series.push_back(std::move(s));
      }
  run.svg("excursion", svg_lines(series, {"excursion time", "harmonic order", "t_re - t_ion [T]", false}));
}

void cmd_spectrum(Run& run, const std::string& method) {
  auto& cfg = run.cfg();
  SpectrumTable s;
  if (method == "fft") {
    s = compute_spectrum(cfg.field, cfg.atom, cfg.numerics, run.threads());
  } else if (method == "saddle") {
    const auto qs = run.qs("1:45", 0.125);
    s = spectrum_saddle(cfg.field, cfg.atom, cfg.numerics, qs, parse_mode(run.opts().mode));
  } else {
    throw ConfigError("invalid method '" + method + "': must be fft or saddle");
  }
  run.csv("spectrum", spectrum_csv(s));
  Series ser{s.meta.mode, {}, {}};
  for (std::size_t j = 0; j < s.size(); ++j)
    if (s.omega[j] <= 60.0) {
      ser.x.push_back(s.omega[j]);
      ser.y.push_back(s.intensity[j]);
    }
  run.svg("spectrum", svg_lines({ser}, {"HHG spectrum", "harmonic order", "|d(w)|^2", true}));
  for (real q : s.meta.flagged) std::cerr << "warning: no physical orbit at q = " << q << "\n";
}

void write_phase_map(Run& run, const PhaseMap& m, const std::string& name) {
  run.csv(name, phase_map_csv(m));
  const real q0 = m.q_grid.front(), q1 = m.q_grid.back();
  const real p0 = m.phi_grid.front(), p1 = m.phi_grid.back();
  run.svg(name + "_re", svg_heatmap(m.re_sigma_phi, q0, q1, p0, p1, {"Re(sigma + Phi)", "harmonic order", "phi", false}));
  run.svg(name + "_im", svg_heatmap(m.im_sigma_phi, q0, q1, p0, p1, {"Im(sigma + Phi)", "harmonic order", "phi", false}));
}

void cmd_phase_map(Run& run, bool fano) {
  auto& cfg = run.cfg();
  if (fano && !cfg.atom.fano) cfg.atom.fano = FanoConfig{};
  const auto qs = run.qs("11:51");
  const auto phis = run.phis(default_phis(32));
  std::optional<SqueezeConfig> sq;
  if (run.opts().mode == "squeezed") sq = squeeze_of(cfg);
  write_phase_map(run, phase_map(cfg.field, cfg.atom, cfg.numerics, qs, phis, run.threads(), sq), "phase_map");
}

// with and without the resonance, same grid
void cmd_fano(Run& run) {
  auto& cfg = run.cfg();
  const auto qs = run.qs("11:51");
  const auto phis = run.phis(default_phis(32));
  AtomConfig with = cfg.atom, without = cfg.atom;
  if (!with.fano) with.fano = FanoConfig{};
  without.fano.reset();
  cfg.atom = with;
  write_phase_map(run, phase_map(cfg.field, with, cfg.numerics, qs, phis, run.threads()), "phase_map_fano");
  write_phase_map(run, phase_map(cfg.field, without, cfg.numerics, qs, phis, run.threads()), "phase_map_nofano");
}


// one cycle of the drive per phi, with the 1-sigma spread of the squeezed quadrature
void write_field(Run& run, const std::vector<real>& phis, const SqueezeConfig& sq) {
  CsvTable t{{"phi", "t_over_T", "A_total", "E_total", "A_sd", "E_sd"}, {}};
  std::vector<Series> a_series, e_series;
  const real sd = std::sqrt(sq.varsigma());
  for (real phi : phis) {
    FieldConfig c = run.cfg().field;
    c.phi = phi;
    const TwoColorField f(c);
    const real w = f.omega(), T = f.period();
    Series sa{"phi=" + phi_tag(phi), {}, {}}, se = sa;
    for (int k = 0; k <= 256; ++k) {
      const real tt = T * k / 256.0;
      const real a = f.a_w(tt) + f.a_2w(tt), e = f.e_w(tt) + f.e_2w(tt);
      const real s2 = std::sin(2 * w * tt), c2 = std::cos(2 * w * tt);
      const bool x = sq.axis == SqueezeAxis::x;
      const real a_sd = sd * std::abs(x ? s2 : c2) / (2 * w), e_sd = sd * std::abs(x ? c2 : s2);
      t.rows.push_back({format_real(phi), format_real(k / 256.0), format_real(a), format_real(e), format_real(a_sd),
                        format_real(e_sd)});
      sa.x.push_back(k / 256.0);
      sa.y.push_back(a);
      se.x.push_back(k / 256.0);
      se.y.push_back(e);
    }
    a_series.push_back(std::move(sa));
    e_series.push_back(std::move(se));
  }
  run.csv("field", t);
  run.svg("field_A", svg_lines(a_series, {"vector potential", "t / T", "A(t)", false}));
  run.svg("field_E", svg_lines(e_series, {"electric field", "t / T", "E(t)", false}));
}

void cmd_squeezed(Run& run) {
  auto& cfg = run.cfg();
  const SqueezeConfig sq = squeeze_of(cfg);
  NodeCache cache;
  std::vector<Series> series;
  write_field(run, run.phis({cfg.field.phi}), sq);
  for (real phi : run.phis({cfg.field.phi})) {
    FieldConfig f = cfg.field;
    f.phi = phi;
    const auto s = squeezed_spectrum(f, cfg.atom, sq, cfg.numerics, cache, run.threads());
    run.csv("squeezed_spectrum_phi" + phi_tag(phi), spectrum_csv(s));
    Series ser{"phi=" + phi_tag(phi), {}, {}};
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s.omega[j] <= 45.0) {
        ser.x.push_back(s.omega[j]);
        ser.y.push_back(s.intensity[j]);
      }
    series.push_back(std::move(ser));
  }
  run.svg("squeezed_spectrum", svg_lines(series, {"squeezed-driver spectrum", "harmonic order", "|d(w)|^2", true}));
}

void cmd_wigner(Run& run, real q, int points, bool normalize) {
  auto& cfg = run.cfg();
  const SqueezeConfig sq = squeeze_of(cfg);
  NodeCache cache;
  for (real phi : run.phis({cfg.field.phi})) {
    FieldConfig f = cfg.field;
    f.phi = phi;
    const auto ens = build_ensemble(f, cfg.atom, sq, cfg.numerics, q, cfg.numerics.kappa, cache, run.threads());
    const auto grid = default_grid(ens, points);
    const mat W = wigner(ens, grid, normalize);
    char name[64];
    std::snprintf(name, sizeof name, "wigner_q%g_phi%s", q, phi_tag(phi).c_str());
    run.csv(name, wigner_csv(grid, W));
    char title[96];
    std::snprintf(title, sizeof title, "Wigner function q=%g phi=%s", q, phi_tag(phi).c_str());
    run.svg(name, svg_heatmap(W, grid.x0, grid.x1, grid.y0, grid.y1, {title, "Re gamma", "Im gamma", false}));
  }
}

void cmd_observables(Run& run) {
  auto& cfg = run.cfg();
  const SqueezeConfig sq = squeeze_of(cfg);
  const auto qs = run.qs("11:16");
  const auto phis = run.phis(default_phis(16));
  const auto rows = observables_sweep(cfg.field, cfg.atom, sq, cfg.numerics, qs, phis, cfg.numerics.kappa,
                                      run.threads());
  run.csv("observables", observables_csv(rows));
  for (int which = 0; which < 3; ++which) {
    std::vector<Series> series;
    for (real q : qs) {
      Series s{"q=" + format_real(q), {}, {}};
      for (const auto& r : rows)
        if (r.q == q) {
          s.x.push_back(r.phi);
          s.y.push_back(which == 0 ? r.obs.var_min : which == 1 ? r.obs.var_max : r.obs.g2);
        }
      series.push_back(std::move(s));
    }
    static const char* names[] = {"var_min", "var_max", "g2"};
    run.svg(std::string("observables_") + names[which],
            svg_lines(series, {names[which], "phi", names[which], which == 1}));
  }
}

int cmd_compare(const std::string& a, const std::string& b, real tol) {
  const auto rep = compare(parse_csv(read_text(a)), parse_csv(read_text(b)), tol);
  std::cout << "column,max_rel_dev,ok\n";
  for (const auto& c : rep.columns) std::cout << c.name << "," << format_real(c.max_rel) << "," << (c.ok ? 1 : 0) << "\n";
  return rep.ok ? 0 : 1;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON configuration file");
  sub->add_option("--out", c.out_dir, "output directory");
  sub->add_option("--set", c.overrides, "override one config key, KEY=VALUE (repeatable)");
  sub->add_flag("--plot", c.plot, "also write SVG plots");
  sub->add_option("--threads", c.threads, "worker threads (default: HHGWM_THREADS or all cores)");
  sub->add_option("--mode", c.mode, "saddle mode: bare, sigma, sigma_phi, squeezed (trajectories takes a comma list or all)");
  sub->add_option("--phi", c.phi_list, "comma-separated delays in rad; 'pi' suffix allowed, e.g. 0,0.5pi,pi");
  sub->add_option("--q-range", c.q_range, "harmonic orders A:B");
  sub->add_option("--nodes", c.nodes, "Gauss-Hermite nodes for squeezed averages");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-color HHG with weak-value corrections and squeezed drivers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string);

  Common c;
  std::string method = "fft";
  real wigner_q = 12.0;
  int wigner_points = 201;
  bool wigner_norm = false;
  bool fano_flag = false;
  std::string cmp_a, cmp_b;
  real cmp_tol = 1e-8;

  auto* traj = app.add_subcommand("trajectories", "saddle-point orbits and excursion times");
  auto* spec = app.add_subcommand("spectrum", "HHG spectrum (time-domain FFT or saddle sum)");
  spec->add_option("--method", method, "fft or saddle");
  auto* pmap = app.add_subcommand("phase-map", "sigma and sigma + Phi over (q, phi)");
  pmap->add_flag("--fano", fano_flag, "include the autoionizing resonance");
  auto* fano = app.add_subcommand("fano", "phase maps with and without the resonance");
  auto* sqz = app.add_subcommand("squeezed-spectrum", "spectrum averaged over a squeezed 2w driver");
  auto* wig = app.add_subcommand("wigner", "Wigner function of one harmonic mode");
  wig->add_option("--q", wigner_q, "harmonic order (integer)");
  wig->add_option("--points", wigner_points, "grid points per side (raised if too coarse)");
  wig->add_flag("--normalize", wigner_norm, "scale the maximum to one");
  auto* obs = app.add_subcommand("observables", "quadrature variances and g2 over a phi sweep");
  for (auto* s : {traj, spec, pmap, fano, sqz, wig, obs}) add_common(s, c);
  auto* cmp = app.add_subcommand("compare", "column-wise relative deviation between two CSV files");
  cmp->add_option("a", cmp_a)->required();
  cmp->add_option("b", cmp_b)->required();
  cmp->add_option("--tol", cmp_tol, "maximum relative deviation");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmp) return cmd_compare(cmp_a, cmp_b, cmp_tol);
    auto* sub = app.get_subcommands().front();
    Run run(sub->get_name(), c, argc, argv);
    if (*traj) cmd_trajectories(run);
    if (*spec) cmd_spectrum(run, method);
    if (*pmap) cmd_phase_map(run, fano_flag);
    if (*fano) cmd_fano(run);
    if (*sqz) cmd_squeezed(run);
    if (*wig) cmd_wigner(run, wigner_q, wigner_points, wigner_norm);
    if (*obs) cmd_observables(run);
    run.finish();
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
