#pragma once

#include <string>
#include <vector>

#include "hhgwm/quantum_optics.hpp"
#include "hhgwm/saddle.hpp"
#include "hhgwm/spectrum.hpp"

namespace hhgwm {

inline constexpr const char* version_string = "0.1.0";

/// Header plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws SchemaMismatch
  std::vector<real> numbers(const std::string& name) const;
};

/// Shortest round-trip decimal form, '.' separator whatever the locale.
std::string format_real(real v);

CsvTable spectrum_csv(const SpectrumTable& s);
CsvTable phase_map_csv(const PhaseMap& m);
CsvTable excursion_csv(const std::vector<ExcursionRow>& rows);
CsvTable trajectories_csv(const std::vector<SaddleSolution>& sols, real phi);
CsvTable observables_csv(const std::vector<ObservableRow>& rows);
/// Long form x, y, W.
CsvTable wigner_csv(const PhaseSpaceGrid& grid, const mat& W);

std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct ColumnDeviation {
  std::string name;
  real max_rel = 0.0;
  bool ok = true;
};

struct CompareReport {
  std::vector<ColumnDeviation> columns;
  bool ok = true;
};

/// Column-wise max |a−b| / max(|a|, |b|, floor); text cells must match
/// exactly. Throws SchemaMismatch on differing headers or row counts.
CompareReport compare(const CsvTable& a, const CsvTable& b, real tolerance, real floor = 1e-300);

struct Series {
  std::string label;
  std::vector<real> x, y;
};

struct PlotOptions {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
};

std::string svg_lines(const std::vector<Series>& series, const PlotOptions& opt);
/// Rows of `z` run along y from y0 to y1, columns along x.
std::string svg_heatmap(const mat& z, real x0, real x1, real y0, real y1, const PlotOptions& opt);

/// Reproducibility record written next to every output.
std::string sidecar_json(const std::string& command, const RunConfig& cfg, const std::vector<std::string>& args,
                         real wall_seconds);

}  // namespace hhgwm
