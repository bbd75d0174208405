#include "hhgwm/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "hhgwm/errors.hpp"

namespace hhgwm {

namespace {

std::string cell(bool b) { return b ? "1" : "0"; }

bool parse_number(const std::string& s, real& out) {
  if (s == "nan") {
    out = std::numeric_limits<real>::quiet_NaN();
    return true;
  }
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && p == end;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_real(real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaMismatch("no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<real> CsvTable::numbers(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<real> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    real v;
    if (!parse_number(r.at(c), v)) throw SchemaMismatch("column '" + name + "' is not numeric");
    out.push_back(v);
  }
  return out;
}

CsvTable spectrum_csv(const SpectrumTable& s) {
  CsvTable t{{"omega_over_w", "re_amp", "im_amp", "intensity"}, {}};
  t.rows.reserve(s.size());
  for (std::size_t j = 0; j < s.size(); ++j)
    t.rows.push_back({format_real(s.omega[j]), format_real(s.amplitude[j].real()),
                      format_real(s.amplitude[j].imag()), format_real(s.intensity[j])});
  return t;
}

CsvTable phase_map_csv(const PhaseMap& m) {
  CsvTable t{{"q", "phi", "re_sigma", "im_sigma", "re_sigma_phi", "im_sigma_phi", "converged"}, {}};
  for (std::size_t i = 0; i < m.phi_grid.size(); ++i)
    for (std::size_t j = 0; j < m.q_grid.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      t.rows.push_back({format_real(m.q_grid[j]), format_real(m.phi_grid[i]), format_real(m.re_sigma(a, b)),
                        format_real(m.im_sigma(a, b)), format_real(m.re_sigma_phi(a, b)),
                        format_real(m.im_sigma_phi(a, b)), cell(m.converged[i][j])});
    }
  return t;
}

CsvTable excursion_csv(const std::vector<ExcursionRow>& rows) {
  CsvTable t{{"q", "mode", "phi", "branch", "class", "excursion_periods", "converged"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({format_real(r.q), to_string(r.mode), format_real(r.phi), r.branch.str(),
                      to_string(r.traj_class), format_real(r.excursion), cell(r.converged)});
  return t;
}

CsvTable trajectories_csv(const std::vector<SaddleSolution>& sols, real phi) {
  CsvTable t{{"q", "mode", "phi", "branch", "class", "re_p", "im_p", "re_t_ion", "im_t_ion", "re_t_re", "im_t_re",
              "residual", "hessian_ok"},
             {}};
  for (const auto& s : sols)
    t.rows.push_back({format_real(s.q), to_string(s.mode), format_real(phi), s.branch.str(),
                      to_string(s.traj_class), format_real(s.p_s.real()), format_real(s.p_s.imag()),
                      format_real(s.t_ion.real()), format_real(s.t_ion.imag()), format_real(s.t_re.real()),
                      format_real(s.t_re.imag()), format_real(s.residual), cell(s.hessian_ok)});
  return t;
}

CsvTable observables_csv(const std::vector<ObservableRow>& rows) {
  CsvTable t{{"q", "phi", "var_min", "var_max", "theta_min", "theta_max", "g2", "mean_photons"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({format_real(r.q), format_real(r.phi), format_real(r.obs.var_min),
                      format_real(r.obs.var_max), format_real(r.obs.theta_min), format_real(r.obs.theta_max),
                      format_real(r.obs.g2), format_real(r.obs.mean_photons)});
  return t;
}

CsvTable wigner_csv(const PhaseSpaceGrid& g, const mat& W) {
  CsvTable t{{"x", "y", "W"}, {}};
  t.rows.reserve(static_cast<std::size_t>(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) t.rows.push_back({format_real(g.x(i)), format_real(g.y(j)), format_real(W(j, i))});
  return t;
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw SchemaMismatch("row " + std::to_string(t.rows.size() + 1) + " has " + std::to_string(cells.size()) +
                             " cells, header has " + std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw SchemaMismatch("empty table");
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("invalid output path: cannot open " + path);
  out << text;
  if (!out) throw ConfigError("invalid output path: write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("invalid input path: cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CompareReport compare(const CsvTable& a, const CsvTable& b, real tolerance, real floor) {
  if (a.header != b.header) throw SchemaMismatch("headers differ");
  if (a.rows.size() != b.rows.size())
    throw SchemaMismatch("row counts differ: " + std::to_string(a.rows.size()) + " vs " +
                         std::to_string(b.rows.size()));
  CompareReport rep;
  for (std::size_t c = 0; c < a.header.size(); ++c) {
    ColumnDeviation col{a.header[c], 0.0, true};
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const auto& sa = a.rows[r][c];
      const auto& sb = b.rows[r][c];
      if (sa == sb) continue;
      real x, y;
      if (!parse_number(sa, x) || !parse_number(sb, y) || std::isnan(x) != std::isnan(y)) {
        col.max_rel = std::numeric_limits<real>::infinity();
        continue;
      }
      if (std::isnan(x)) continue;
      const real scale = std::max({std::abs(x), std::abs(y), floor});
      col.max_rel = std::max(col.max_rel, std::abs(x - y) / scale);
    }
    col.ok = col.max_rel <= tolerance;
    rep.ok = rep.ok && col.ok;
    rep.columns.push_back(col);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr int W_px = 720, H_px = 440, L = 70, R = 20, T = 40, B = 50;

struct Axis {
  real lo, hi;
  bool log;
  real map(real v, real a, real b) const {
    const real f = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
    return a + f * (b - a);
  }
};

std::string num(real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string svg_header(const PlotOptions& opt) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W_px) + "\" height=\"" +
                  std::to_string(H_px) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(W_px / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
       xml_escape(opt.title) + "</text>\n";
  s += "<text x=\"" + std::to_string((L + W_px - R) / 2) + "\" y=\"" + std::to_string(H_px - 10) +
       "\" text-anchor=\"middle\">" + xml_escape(opt.xlabel) + "</text>\n";
  s += "<text x=\"16\" y=\"" + std::to_string((T + H_px - B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       std::to_string((T + H_px - B) / 2) + ")\">" + xml_escape(opt.ylabel) + "</text>\n";
  return s;
}

std::string frame(const Axis& ax, const Axis& ay) {
  std::string s = "<rect x=\"" + std::to_string(L) + "\" y=\"" + std::to_string(T) + "\" width=\"" +
                  std::to_string(W_px - L - R) + "\" height=\"" + std::to_string(H_px - T - B) +
                  "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const real f = k / 4.0;
    const real xv = ax.lo + f * (ax.hi - ax.lo);
    const real yv = ay.log ? std::pow(10.0, std::log10(ay.lo) + f * (std::log10(ay.hi) - std::log10(ay.lo)))
                           : ay.lo + f * (ay.hi - ay.lo);
    const real px = L + f * (W_px - L - R);
    const real py = H_px - B - f * (H_px - T - B);
    s += "<text x=\"" + num(px) + "\" y=\"" + std::to_string(H_px - B + 16) + "\" text-anchor=\"middle\">" + num(xv) +
         "</text>\n";
    s += "<text x=\"" + std::to_string(L - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + num(yv) +
         "</text>\n";
  }
  return s;
}

}  // namespace

std::string svg_lines(const std::vector<Series>& series, const PlotOptions& opt) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};
  real xlo = std::numeric_limits<real>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (opt.log_y && s.y[i] <= 0.0)) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  if (!(xhi > xlo)) xlo -= 0.5, xhi += 0.5;
  if (opt.log_y) ylo = std::max(ylo, yhi * 1e-12);
  if (!(yhi > ylo)) ylo = opt.log_y ? ylo / 10 : ylo - 0.5, yhi = opt.log_y ? yhi * 10 : yhi + 0.5;
  const Axis ax{xlo, xhi, false}, ay{ylo, yhi, opt.log_y};

  std::string s = svg_header(opt) + frame(ax, ay);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& ser = series[k];
    std::string pts;
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      real y = ser.y[i];
      if (!std::isfinite(y)) continue;
      y = std::clamp(y, ylo, yhi);
      pts += num(ax.map(ser.x[i], L, W_px - R)) + "," + num(ay.map(y, H_px - B, T)) + " ";
    }
    const char* c = colors[k % std::size(colors)];
    s += std::string("<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"") + c + "\" points=\"" + pts + "\"/>\n";
    s += "<text x=\"" + std::to_string(W_px - R - 8) + "\" y=\"" + std::to_string(T + 16 + 14 * k) +
         "\" text-anchor=\"end\" fill=\"" + c + "\">" + xml_escape(ser.label) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string svg_heatmap(const mat& z, real x0, real x1, real y0, real y1, const PlotOptions& opt) {
  const Axis ax{x0, x1, false}, ay{y0, y1, false};
  std::string s = svg_header(opt) + frame(ax, ay);
  const real zlo = z.size() ? z.minCoeff() : 0.0, zhi = z.size() ? z.maxCoeff() : 1.0;
  const real span = zhi > zlo ? zhi - zlo : 1.0;
  // cap the drawn cells so big grids still give a small file
  const Eigen::Index step_r = std::max<Eigen::Index>(1, z.rows() / 200);
  const Eigen::Index step_c = std::max<Eigen::Index>(1, z.cols() / 200);
  const real cw = real(W_px - L - R) / z.cols() * step_c, ch = real(H_px - T - B) / z.rows() * step_r;
  for (Eigen::Index r = 0; r < z.rows(); r += step_r)
    for (Eigen::Index c = 0; c < z.cols(); c += step_c) {
      const real f = std::isfinite(z(r, c)) ? (z(r, c) - zlo) / span : 0.0;
      // white to dark blue
      const int g = static_cast<int>(255 * (1.0 - f));
      const int b = static_cast<int>(255 - 120 * f);
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", g, g, b);
      s += "<rect x=\"" + num(L + c * cw / step_c) + "\" y=\"" + num(H_px - B - (r + step_r) * ch / step_r) +
           "\" width=\"" + num(cw + 0.3) + "\" height=\"" + num(ch + 0.3) + "\" fill=\"" + fill + "\"/>\n";
    }
  return s + "</svg>\n";
}

std::string sidecar_json(const std::string& command, const RunConfig& cfg, const std::vector<std::string>& args,
                         real wall_seconds) {
  nlohmann::json j;
  j["tool"] = "hhgwm";
  j["version"] = version_string;
  j["command"] = command;
  j["arguments"] = args;
  j["config"] = nlohmann::json::parse(dump_config(cfg));
  j["wall_time_s"] = wall_seconds;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["finished_utc"] = stamp;
  return j.dump(2) + "\n";
}

}  // namespace hhgwm
