#include "hhgwm/config.hpp"

#include <functional>
#include <map>

#include <json.hpp>

#include "hhgwm/errors.hpp"

namespace hhgwm {

using json = nlohmann::json;

std::string to_string(WeakValueForm f) { return f == WeakValueForm::linear ? "linear" : "exponential"; }
std::string to_string(SqueezeAverage a) {
  return a == SqueezeAverage::amplitude ? "amplitude" : "intensity";
}

namespace {

struct Draft {
  RunConfig cfg;
  bool alpha_set = false;
  bool any_fano = false;
  bool any_squeeze = false;
};

template <class T>
T as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError("invalid " + key + ": expected integer");
      return v.get<int>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("invalid " + key + ": expected boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("invalid " + key + ": expected string");
      return v.get<std::string>();
    } else {
      if (!v.is_number()) throw ConfigError("invalid " + key + ": expected number");
      return v.get<T>();
    }
  } catch (const json::exception& e) {
    throw ConfigError("invalid " + key + ": " + e.what());
  }
}

template <class E>
E pick(const json& v, const std::string& key, std::initializer_list<std::pair<const char*, E>> opts) {
  const auto s = as<std::string>(v, key);
  for (const auto& [name, value] : opts)
    if (s == name) return value;
  throw ConfigError("invalid " + key + ": unknown option '" + s + "'");
}

using Setter = std::function<void(Draft&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"E_omega", [](Draft& d, const json& v, const std::string& k) { d.cfg.field.E_omega = as<real>(v, k); }},
      {"omega", [](Draft& d, const json& v, const std::string& k) { d.cfg.field.omega = as<real>(v, k); }},
      {"epsilon", [](Draft& d, const json& v, const std::string& k) { d.cfg.field.epsilon = as<real>(v, k); }},
      {"phi", [](Draft& d, const json& v, const std::string& k) { d.cfg.field.phi = as<real>(v, k); }},
      {"envelope_shape",
       [](Draft& d, const json& v, const std::string& k) {
         d.cfg.field.envelope_shape = pick<Envelope>(v, k, {{"flat", Envelope::flat}, {"sin2", Envelope::sin2}});
       }},
      {"n_cycles", [](Draft& d, const json& v, const std::string& k) { d.cfg.field.n_cycles = as<int>(v, k); }},
      {"Ip", [](Draft& d, const json& v, const std::string& k) { d.cfg.atom.Ip = as<real>(v, k); }},
      {"alpha",
       [](Draft& d, const json& v, const std::string& k) {
         d.cfg.atom.alpha = as<real>(v, k);
         d.alpha_set = true;
       }},
      {"gamma",
       [](Draft& d, const json& v, const std::string& k) {
         d.any_fano = true;
         d.cfg.atom.fano.value().gamma = as<real>(v, k);
       }},
      {"q_asym",
       [](Draft& d, const json& v, const std::string& k) {
         d.any_fano = true;
         d.cfg.atom.fano.value().q_asym = as<real>(v, k);
       }},
      {"omega_R",
       [](Draft& d, const json& v, const std::string& k) {
         d.any_fano = true;
         d.cfg.atom.fano.value().omega_R = as<real>(v, k);
       }},
      {"I_squ",
       [](Draft& d, const json& v, const std::string& k) {
         d.any_squeeze = true;
         d.cfg.squeeze.value().I_squ = as<real>(v, k);
       }},
      {"axis",
       [](Draft& d, const json& v, const std::string& k) {
         d.any_squeeze = true;
         d.cfg.squeeze.value().axis = pick<SqueezeAxis>(v, k, {{"x", SqueezeAxis::x}, {"y", SqueezeAxis::y}});
       }},
      {"pole_guard", [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.pole_guard = as<real>(v, k); }},
      {"pole_delta", [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.pole_delta = as<real>(v, k); }},
      {"divergence_threshold",
       [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.divergence_threshold = as<real>(v, k); }},
      {"solver_tol", [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.solver_tol = as<real>(v, k); }},
      {"max_iterations",
       [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.max_iterations = as<int>(v, k); }},
      {"short_long_split",
       [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.short_long_split = as<real>(v, k); }},
      {"second_order",
       [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.second_order = as<bool>(v, k); }},
      {"tau_max_cycles",
       [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.tau_max_cycles = as<real>(v, k); }},
      {"eps_reg", [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.eps_reg = as<real>(v, k); }},
      {"points_per_cycle",
       [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.points_per_cycle = as<int>(v, k); }},
      {"zero_pad", [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.zero_pad = as<int>(v, k); }},
      {"weak_value_form",
       [](Draft& d, const json& v, const std::string& k) {
         d.cfg.numerics.weak_value_form = pick<WeakValueForm>(
             v, k, {{"linear", WeakValueForm::linear}, {"exponential", WeakValueForm::exponential}});
       }},
      {"nodes", [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.nodes = as<int>(v, k); }},
      {"squeeze_average",
       [](Draft& d, const json& v, const std::string& k) {
         d.cfg.numerics.squeeze_average = pick<SqueezeAverage>(
             v, k, {{"amplitude", SqueezeAverage::amplitude}, {"intensity", SqueezeAverage::intensity}});
       }},
      {"kappa", [](Draft& d, const json& v, const std::string& k) { d.cfg.numerics.kappa = as<real>(v, k); }},
  };
  return table;
}

void check_numerics(const Numerics& n) {
  auto need = [](bool ok, const char* key, const char* rule) {
    if (!ok) throw ConfigError(std::string("invalid ") + key + ": must satisfy " + rule);
  };
  need(n.pole_guard > 0.0, "pole_guard", "> 0");
  need(n.pole_delta >= 0.0, "pole_delta", ">= 0");
  need(n.divergence_threshold > 0.0, "divergence_threshold", "> 0");
  need(n.solver_tol > 0.0, "solver_tol", "> 0");
  need(n.max_iterations >= 1, "max_iterations", ">= 1");
  need(n.short_long_split > 0.0 && n.short_long_split < 1.5, "short_long_split", "in (0, 1.5)");
  need(n.tau_max_cycles > 0.0, "tau_max_cycles", "> 0");
  need(n.eps_reg >= 0.0, "eps_reg", ">= 0");
  need(n.points_per_cycle >= 16 && n.points_per_cycle % 2 == 0, "points_per_cycle", "even and >= 16");
  need(n.zero_pad >= 1, "zero_pad", ">= 1");
  need(n.nodes >= 1, "nodes", ">= 1");
  need(n.kappa > 0.0, "kappa", "> 0");
}

RunConfig from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  Draft d;
  d.cfg.atom.fano = FanoConfig{};
  d.cfg.squeeze = SqueezeConfig{};
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key: " + key);
    it->second(d, value, key);
  }
  if (!d.any_fano) d.cfg.atom.fano.reset();
  if (!d.any_squeeze) d.cfg.squeeze.reset();
  if (!d.alpha_set) d.cfg.atom.alpha = 0.8 * d.cfg.atom.Ip;

  d.cfg.field = validated(d.cfg.field);
  validate(d.cfg.atom);
  if (d.cfg.squeeze) validate(*d.cfg.squeeze);
  check_numerics(d.cfg.numerics);
  return d.cfg;
}

json to_json(const RunConfig& c) {
  json j;
  j["E_omega"] = c.field.E_omega;
  j["omega"] = c.field.omega;
  j["epsilon"] = c.field.epsilon;
  j["phi"] = c.field.phi;
  j["envelope_shape"] = to_string(c.field.envelope_shape);
  j["n_cycles"] = c.field.n_cycles;
  j["Ip"] = c.atom.Ip;
  j["alpha"] = c.atom.alpha;
  if (c.atom.fano) {
    j["gamma"] = c.atom.fano->gamma;
    j["q_asym"] = c.atom.fano->q_asym;
    j["omega_R"] = c.atom.fano->omega_R;
  }
  if (c.squeeze) {
    j["I_squ"] = c.squeeze->I_squ;
    j["axis"] = to_string(c.squeeze->axis);
  }
  const auto& n = c.numerics;
  j["pole_guard"] = n.pole_guard;
  j["pole_delta"] = n.pole_delta;
  j["divergence_threshold"] = n.divergence_threshold;
  j["solver_tol"] = n.solver_tol;
  j["max_iterations"] = n.max_iterations;
  j["short_long_split"] = n.short_long_split;
  j["second_order"] = n.second_order;
  j["tau_max_cycles"] = n.tau_max_cycles;
  j["eps_reg"] = n.eps_reg;
  j["points_per_cycle"] = n.points_per_cycle;
  j["zero_pad"] = n.zero_pad;
  j["weak_value_form"] = to_string(n.weak_value_form);
  j["nodes"] = n.nodes;
  j["squeeze_average"] = to_string(n.squeeze_average);
  j["kappa"] = n.kappa;
  return j;
}

}  // namespace

RunConfig load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse failure: ") + e.what());
  }
  return from_json(doc);
}

void apply_override(RunConfig& cfg, std::string_view key, std::string_view value) {
  json doc = to_json(cfg);
  // alpha follows Ip unless it was overridden explicitly alongside
  const bool alpha_tied = std::abs(cfg.atom.alpha - 0.8 * cfg.atom.Ip) < 1e-15;
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = std::string(value);
  }
  doc[std::string(key)] = parsed;
  if (key == "Ip" && alpha_tied) doc.erase("alpha");
  cfg = from_json(doc);
}

std::string dump_config(const RunConfig& cfg, int indent) { return to_json(cfg).dump(indent); }

}  // namespace hhgwm
