#pragma once

// Run configuration for the command-line front end: parsing from and
// emission to the [section] key = value text format.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "udw/harvest.hpp"

namespace udw::cli {

using detector::Scenario;
using detector::ScenarioConfig;
using harvest::Quantities;
using harvest::SweepParameter;
using harvest::Tolerances;

/// Error in a configuration file, naming the offending field.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

enum class ThresholdTarget { DeltaDMax, AMax };

inline const char* to_string(ThresholdTarget t) {
  return t == ThresholdTarget::DeltaDMax ? "dd_max" : "a_max";
}

struct SweepSection {
  SweepParameter parameter = SweepParameter::DeltaZ;
  std::vector<double> grid;
  Quantities quantities;

  bool operator==(const SweepSection&) const = default;
};

struct ThresholdSection {
  ThresholdTarget target = ThresholdTarget::DeltaDMax;
  double lo = 0.1;
  double hi = 6.0;
  double tol = 1e-3;
  int scan_points = 6;

  bool operator==(const ThresholdSection&) const = default;
};

struct RunConfig {
  ScenarioConfig scenario;
  Tolerances tolerances;
  std::optional<SweepSection> sweep;
  std::optional<ThresholdSection> threshold;

  /// Checks cross-field constraints that the individual sections cannot.
  void validate() const;
};

inline bool operator==(const quad::QuadratureSpec& l, const quad::QuadratureSpec& r) {
  return l.rel_tol == r.rel_tol && l.abs_tol == r.abs_tol &&
         l.max_subdivisions == r.max_subdivisions &&
         l.truncation_exponent == r.truncation_exponent &&
         l.epsilon_schedule == r.epsilon_schedule &&
         l.extrapolation_order == r.extrapolation_order;
}

inline bool operator==(const RunConfig& l, const RunConfig& r) {
  const auto& a = l.scenario;
  const auto& b = r.scenario;
  return a.scenario == b.scenario && a.a == b.a && a.delta_d == b.delta_d &&
         a.delta_z == b.delta_z && a.omega == b.omega && l.tolerances.p == r.tolerances.p &&
         l.tolerances.x == r.tolerances.x && l.sweep == r.sweep && l.threshold == r.threshold;
}

// ---------------------------------------------------------------------------
// Formatting

/// Shortest form that reads back to the same double (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

inline std::string format_quantities(const Quantities& q) {
  std::vector<std::string> names;
  if (q.p) names.push_back("p");
  if (q.x) names.push_back("x");
  if (q.c) names.push_back("c");
  if (q.concurrence) names.push_back("concurrence");
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

inline double parse_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(field + ": expected a number, got an empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(field + ": expected a number, got '" + t + "'");
  }
  return v;
}

inline int parse_int(const std::string& field, const std::string& text) {
  const double v = parse_double(field, text);
  if (v != static_cast<double>(static_cast<int>(v))) {
    throw ConfigError(field + ": expected an integer, got '" + trim(text) + "'");
  }
  return static_cast<int>(v);
}

/// "v1, v2, ..." or "linspace(lo, hi, n)".
inline std::vector<double> parse_grid(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  const std::string head = "linspace(";
  if (t.rfind(head, 0) == 0) {
    if (t.back() != ')') throw ConfigError(field + ": unterminated linspace(...)");
    const auto args = split(t.substr(head.size(), t.size() - head.size() - 1), ',');
    if (args.size() != 3) throw ConfigError(field + ": linspace takes (lo, hi, n)");
    const double lo = parse_double(field, args[0]);
    const double hi = parse_double(field, args[1]);
    const int n = parse_int(field, args[2]);
    if (n < 1) throw ConfigError(field + ": linspace needs n >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
  }
  std::vector<double> v;
  for (const auto& item : split(t, ',')) v.push_back(parse_double(field, item));
  return v;
}

inline Quantities parse_quantities(const std::string& field, const std::string& text) {
  Quantities q{false, false, false, false};
  for (const auto& item : split(text, ',')) {
    if (item == "p") {
      q.p = true;
    } else if (item == "x") {
      q.x = true;
    } else if (item == "c") {
      q.c = true;
    } else if (item == "concurrence") {
      q.concurrence = true;
    } else {
      throw ConfigError(field + ": unknown quantity '" + item +
                        "' (expected p, x, c, concurrence)");
    }
  }
  if (!(q.p || q.x || q.c || q.concurrence)) throw ConfigError(field + ": no quantities listed");
  return q;
}

/// Reads one section, rejecting keys outside `allowed`.
class Section {
 public:
  Section(const boost::property_tree::ptree* node, std::string name,
          std::set<std::string> allowed)
      : node_(node), name_(std::move(name)) {
    if (!node_) return;
    for (const auto& [key, child] : *node_) {
      if (!allowed.count(key)) throw ConfigError(name_ + "." + key + ": unknown key");
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    if (!node_) return std::nullopt;
    if (auto v = node_->get_optional<std::string>(key)) return trim(*v);
    return std::nullopt;
  }
  std::string field(const std::string& key) const { return name_ + "." + key; }
  std::string require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError(field(key) + ": required key is missing");
    return *v;
  }
  double number(const std::string& key, double fallback) const {
    auto v = get(key);
    return v ? parse_double(field(key), *v) : fallback;
  }

 private:
  const boost::property_tree::ptree* node_;
  std::string name_;
};

inline const boost::property_tree::ptree* child(const boost::property_tree::ptree& root,
                                                const std::string& name) {
  auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

}  // namespace detail

/// With a [sweep] the scenario is checked at every grid point instead of at
/// the template values, so the template may hold a placeholder for the
/// swept field.
inline void RunConfig::validate() const {
  try {
    if (!sweep) scenario.validate();
    tolerances.validate();
  } catch (const OnBoundaryError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  if (sweep) {
    if (sweep->grid.empty()) throw ConfigError("sweep.grid: grid is empty");
    harvest::SweepSpec spec{scenario, sweep->parameter, sweep->grid, sweep->quantities};
    try {
      spec.validate();
    } catch (const OnBoundaryError&) {
      throw;
    } catch (const InputError& e) {
      throw ConfigError(std::string("sweep.grid: ") + e.what());
    }
  }
  if (threshold) {
    if (!sweep) throw ConfigError("threshold: a [sweep] section with the outer grid is required");
    const bool dd = threshold->target == ThresholdTarget::DeltaDMax;
    if ((dd && sweep->parameter == SweepParameter::DeltaD) ||
        (!dd && sweep->parameter == SweepParameter::A)) {
      throw ConfigError("sweep.parameter: cannot sweep the quantity the threshold searches");
    }
    if (!dd && scenario.scenario == Scenario::Inertial) {
      throw ConfigError("threshold.target: a_max needs an accelerated scenario");
    }
    if (!(threshold->hi > threshold->lo)) throw ConfigError("threshold: lo < hi required");
    if (!(threshold->tol > 0.0)) throw ConfigError("threshold.tol: must be > 0");
    if (threshold->scan_points < 1) throw ConfigError("threshold.scan_points: must be >= 1");
  }
}

/// Parses a configuration. A [manifest] section (present in side-car
/// manifests) is ignored, so a manifest is itself a valid configuration.
inline RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  for (const auto& [name, node] : root) {
    static const std::set<std::string> known{"scenario", "detector", "quadrature", "sweep",
                                             "threshold", "manifest"};
    if (node.empty() && !node.data().empty()) {
      throw ConfigError(name + ": key outside any section");
    }
    if (!known.count(name)) throw ConfigError("[" + name + "]: unknown section");
  }

  RunConfig cfg;
  const detail::Section scen(detail::child(root, "scenario"), "scenario",
                             {"kind", "a_sigma", "dd_over_sigma", "dz_over_sigma"});
  const std::string kind = scen.require("kind");
  const auto s = detector::scenario_from_string(kind);
  if (!s) {
    throw ConfigError("scenario.kind: unknown scenario '" + kind +
                      "' (expected inertial, parallel, antiparallel, perpendicular)");
  }
  cfg.scenario.scenario = *s;
  cfg.scenario.a = scen.number("a_sigma", 0.0);
  cfg.scenario.delta_d = detail::parse_double(scen.field("dd_over_sigma"),
                                              scen.require("dd_over_sigma"));
  cfg.scenario.delta_z = detail::parse_double(scen.field("dz_over_sigma"),
                                              scen.require("dz_over_sigma"));

  const detail::Section det(detail::child(root, "detector"), "detector", {"omega_sigma"});
  cfg.scenario.omega =
      detail::parse_double(det.field("omega_sigma"), det.require("omega_sigma"));

  const detail::Section quad(detail::child(root, "quadrature"), "quadrature",
                             {"rel_tol_p", "rel_tol_x", "abs_tol", "max_subdivisions",
                              "truncation_exponent", "epsilon_schedule",
                              "extrapolation_order"});
  auto apply = [&](quad::QuadratureSpec& q, const std::string& rel_key) {
    q.rel_tol = quad.number(rel_key, q.rel_tol);
    q.abs_tol = quad.number("abs_tol", q.abs_tol);
    if (auto v = quad.get("max_subdivisions")) {
      q.max_subdivisions = detail::parse_int(quad.field("max_subdivisions"), *v);
    }
    q.truncation_exponent = quad.number("truncation_exponent", q.truncation_exponent);
    if (auto v = quad.get("epsilon_schedule")) {
      q.epsilon_schedule = detail::parse_grid(quad.field("epsilon_schedule"), *v);
    }
    if (auto v = quad.get("extrapolation_order")) {
      q.extrapolation_order = detail::parse_int(quad.field("extrapolation_order"), *v);
    }
    try {
      q.validate();
    } catch (const InputError& e) {
      throw ConfigError(std::string("quadrature: ") + e.what());
    }
  };
  apply(cfg.tolerances.p, "rel_tol_p");
  apply(cfg.tolerances.x, "rel_tol_x");

  if (const auto* node = detail::child(root, "sweep")) {
    const detail::Section sw(node, "sweep", {"parameter", "grid", "quantities"});
    SweepSection section;
    const std::string param = sw.require("parameter");
    const auto p = harvest::sweep_parameter_from_string(param);
    if (!p) throw ConfigError("sweep.parameter: expected a, dd or dz, got '" + param + "'");
    section.parameter = *p;
    section.grid = detail::parse_grid(sw.field("grid"), sw.require("grid"));
    if (auto q = sw.get("quantities")) section.quantities = detail::parse_quantities(sw.field("quantities"), *q);
    cfg.sweep = section;
  }

  if (const auto* node = detail::child(root, "threshold")) {
    const detail::Section th(node, "threshold", {"target", "lo", "hi", "tol", "scan_points"});
    ThresholdSection section;
    const std::string target = th.require("target");
    if (target == "dd_max") {
      section.target = ThresholdTarget::DeltaDMax;
    } else if (target == "a_max") {
      section.target = ThresholdTarget::AMax;
    } else {
      throw ConfigError("threshold.target: expected dd_max or a_max, got '" + target + "'");
    }
    section.lo = th.number("lo", section.lo);
    section.hi = th.number("hi", section.hi);
    section.tol = th.number("tol", section.tol);
    if (auto v = th.get("scan_points")) {
      section.scan_points = detail::parse_int(th.field("scan_points"), *v);
    }
    cfg.threshold = section;
  }

  cfg.validate();
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

/// Every field written explicitly at full precision, so the text re-parses
/// to an identical configuration.
inline std::string emit_config(const RunConfig& cfg) {
  std::ostringstream out;
  const auto& s = cfg.scenario;
  out << "[scenario]\n"
      << "kind = " << detector::to_string(s.scenario) << "\n"
      << "a_sigma = " << format_double(s.a) << "\n"
      << "dd_over_sigma = " << format_double(s.delta_d) << "\n"
      << "dz_over_sigma = " << format_double(s.delta_z) << "\n\n"
      << "[detector]\n"
      << "omega_sigma = " << format_double(s.omega) << "\n\n";
  const auto& p = cfg.tolerances.p;
  const auto& x = cfg.tolerances.x;
  if (p.abs_tol != x.abs_tol || p.max_subdivisions != x.max_subdivisions ||
      p.truncation_exponent != x.truncation_exponent ||
      p.epsilon_schedule != x.epsilon_schedule ||
      p.extrapolation_order != x.extrapolation_order) {
    throw ConfigError("quadrature: only rel_tol may differ between P and X");
  }
  out << "[quadrature]\n"
      << "rel_tol_p = " << format_double(p.rel_tol) << "\n"
      << "rel_tol_x = " << format_double(x.rel_tol) << "\n"
      << "abs_tol = " << format_double(p.abs_tol) << "\n"
      << "max_subdivisions = " << p.max_subdivisions << "\n"
      << "truncation_exponent = " << format_double(p.truncation_exponent) << "\n"
      << "epsilon_schedule = " << format_list(p.epsilon_schedule) << "\n"
      << "extrapolation_order = " << p.extrapolation_order << "\n";
  if (cfg.sweep) {
    out << "\n[sweep]\n"
        << "parameter = " << harvest::to_string(cfg.sweep->parameter) << "\n"
        << "grid = " << format_list(cfg.sweep->grid) << "\n"
        << "quantities = " << format_quantities(cfg.sweep->quantities) << "\n";
  }
  if (cfg.threshold) {
    const auto& t = *cfg.threshold;
    out << "\n[threshold]\n"
        << "target = " << to_string(t.target) << "\n"
        << "lo = " << format_double(t.lo) << "\n"
        << "hi = " << format_double(t.hi) << "\n"
        << "tol = " << format_double(t.tol) << "\n"
        << "scan_points = " << t.scan_points << "\n";
  }
  return out.str();
}

/// Overrides rel_tol of both the 1D and 2D integrals.
inline void override_rel_tol(RunConfig& cfg, double rel_tol) {
  cfg.tolerances.p.rel_tol = rel_tol;
  cfg.tolerances.x.rel_tol = rel_tol;
  cfg.validate();
}

}  // namespace udw::cli
