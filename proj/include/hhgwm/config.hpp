#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hhgwm/field.hpp"

namespace hhgwm {

/// How the ionization/recombination weak-value factor e^{iA_2ω D} enters the
/// time-domain integrand. `linear` keeps it to first order, d + iA_2ω d²,
/// which is regular where d(v) vanishes; `exponential` uses the exponentiated
/// form and zeroes samples within the pole guard or where |A₂D| > 1.
enum class WeakValueForm { linear, exponential };

/// Where the modulus is taken in the squeezed-driver ensemble average.
enum class SqueezeAverage { amplitude, intensity };

std::string to_string(WeakValueForm f);
std::string to_string(SqueezeAverage a);

/// Solver, grid and tolerance knobs. Every field is a configuration key.
struct Numerics {
  real pole_guard = 1e-6;
  real pole_delta = 0.1;
  real divergence_threshold = 1e6;
  real solver_tol = 1e-10;
  int max_iterations = 200;
  real short_long_split = 0.65;  // excursion time in periods
  bool second_order = false;

  real tau_max_cycles = 1.5;
  real eps_reg = 1e-4;
  int points_per_cycle = 512;
  int zero_pad = 4;
  WeakValueForm weak_value_form = WeakValueForm::linear;

  int nodes = 41;
  SqueezeAverage squeeze_average = SqueezeAverage::intensity;
  real kappa = 2.5e6;
};

struct RunConfig {
  FieldConfig field;
  AtomConfig atom;
  std::optional<SqueezeConfig> squeeze;
  Numerics numerics;
};

/// Parses a flat JSON object whose keys are the field names of the config
/// types. Missing keys take defaults (alpha = 0.8 Ip); unknown keys, type
/// errors and invariant violations throw ConfigError naming the key.
RunConfig load_config(std::string_view text);

/// Applies one KEY=VALUE override (VALUE parsed as JSON, falling back to a
/// bare string) and re-validates.
void apply_override(RunConfig& cfg, std::string_view key, std::string_view value);

/// Fully resolved configuration as a JSON document (round-trips through
/// load_config).
std::string dump_config(const RunConfig& cfg, int indent = 2);

}  // namespace hhgwm
