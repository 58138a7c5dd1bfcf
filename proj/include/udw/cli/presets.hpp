#pragma once

// Built-in parameter sets, one per figure (fig1a ... fig10c). Grid
// densities and threshold brackets are defaults of this tool.

#include <optional>
#include <string>
#include <vector>

#include "udw/cli/config.hpp"

namespace udw::cli {

struct PresetCurve {
  std::string name;  // also the output file stem
  RunConfig config;  // a [threshold] section makes it a threshold run
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<PresetCurve> curves;
};

namespace presets {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

inline const Scenario kAccelerated[] = {Scenario::Parallel, Scenario::AntiParallel,
                                        Scenario::Perpendicular};

inline std::string tag(double v) {
  std::string s = format_double(v);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

inline RunConfig base(Scenario s, double a, double dd, double dz) {
  RunConfig cfg;
  cfg.scenario = {s, a, dd, dz, 0.1};
  return cfg;
}

inline RunConfig sweep(RunConfig cfg, SweepParameter p, std::vector<double> grid,
                       Quantities q = {}) {
  cfg.sweep = SweepSection{p, std::move(grid), q};
  return cfg;
}

inline RunConfig threshold(RunConfig cfg, ThresholdTarget target, double lo, double hi) {
  ThresholdSection t;
  t.target = target;
  t.lo = lo;
  t.hi = hi;
  cfg.threshold = t;
  return cfg;
}

inline const Quantities kPOnly{true, false, false, false};

// P vs a at dz in {0.1, 0.5, 1.0}
inline Preset fig1a() {
  Preset p{"fig1a", "transition probability vs acceleration", {}};
  for (double dz : {0.1, 0.5, 1.0}) {
    p.curves.push_back({"fig1a_dz" + tag(dz),
                        sweep(base(Scenario::Parallel, 0.5, 1.0, dz), SweepParameter::A,
                              linspace(0.02, 2.0, 100), kPOnly)});
  }
  return p;
}

// P vs dz at a in {0, 0.5, 1.0, 1.2}
inline Preset fig1b() {
  Preset p{"fig1b", "transition probability vs distance to the boundary", {}};
  for (double a : {0.0, 0.5, 1.0, 1.2}) {
    const Scenario s = a == 0.0 ? Scenario::Inertial : Scenario::Parallel;
    p.curves.push_back({"fig1b_a" + tag(a), sweep(base(s, a, 1.0, 1.0), SweepParameter::DeltaZ,
                                                  linspace(0.02, 5.0, 150), kPOnly)});
  }
  return p;
}

// inertial concurrence vs dz at dd in {0.5, 1.0, 1.5}
inline Preset fig2a() {
  Preset p{"fig2a", "inertial concurrence vs distance to the boundary", {}};
  for (double dd : {0.5, 1.0, 1.5}) {
    p.curves.push_back({"fig2a_dd" + tag(dd),
                        sweep(base(Scenario::Inertial, 0.0, dd, 1.0), SweepParameter::DeltaZ,
                              linspace(0.02, 5.0, 250))});
  }
  return p;
}

// inertial concurrence vs dd at dz in {0.1, 0.5, 1.5}
inline Preset fig2b() {
  Preset p{"fig2b", "inertial concurrence vs detector separation", {}};
  for (double dz : {0.1, 0.5, 1.5}) {
    p.curves.push_back({"fig2b_dz" + tag(dz),
                        sweep(base(Scenario::Inertial, 0.0, 1.0, dz), SweepParameter::DeltaD,
                              linspace(0.02, 4.0, 200))});
  }
  return p;
}

// |X0| and P vs dz at dd = 1
inline Preset fig3() {
  Preset p{"fig3", "inertial |X| and P vs distance to the boundary", {}};
  p.curves.push_back({"fig3", sweep(base(Scenario::Inertial, 0.0, 1.0, 1.0),
                                    SweepParameter::DeltaZ, linspace(0.02, 5.0, 250))});
  return p;
}

// inertial dd_max vs dz, plus the free-space value far from the plate
inline Preset fig4() {
  Preset p{"fig4", "inertial harvesting range vs distance to the boundary", {}};
  const RunConfig b = base(Scenario::Inertial, 0.0, 1.0, 1.0);
  p.curves.push_back({"fig4", threshold(sweep(b, SweepParameter::DeltaZ, linspace(0.1, 5.0, 50)),
                                        ThresholdTarget::DeltaDMax, 0.1, 6.0)});
  p.curves.push_back({"fig4_free", threshold(sweep(b, SweepParameter::DeltaZ, {1000.0}),
                                             ThresholdTarget::DeltaDMax, 0.1, 6.0)});
  return p;
}

inline std::string panel_name(int fig, int panel) {
  return "fig" + std::to_string(fig) + static_cast<char>('a' + panel);
}

// concurrence vs dz at dd = 1, a in {0.1, 0.5, 1.0}
inline Preset fig5(int panel) {
  const double a = std::vector<double>{0.1, 0.5, 1.0}[static_cast<std::size_t>(panel)];
  Preset p{panel_name(5, panel), "concurrence vs distance to the boundary, a = " + format_double(a), {}};
  for (Scenario s : kAccelerated) {
    p.curves.push_back({p.name + "_" + detector::to_string(s),
                        sweep(base(s, a, 1.0, 1.0), SweepParameter::DeltaZ, linspace(0.02, 5.0, 60))});
  }
  return p;
}

// concurrence vs dz at a = 0.5, dd in {0.5, 0.8, 1.5}
inline Preset fig6(int panel) {
  const double dd = std::vector<double>{0.5, 0.8, 1.5}[static_cast<std::size_t>(panel)];
  Preset p{panel_name(6, panel), "concurrence vs distance to the boundary, dd = " + format_double(dd), {}};
  for (Scenario s : kAccelerated) {
    p.curves.push_back({p.name + "_" + detector::to_string(s),
                        sweep(base(s, 0.5, dd, 1.0), SweepParameter::DeltaZ, linspace(0.02, 5.0, 60))});
  }
  return p;
}

// concurrence vs a at dz = 0.5, dd in {0.2, 0.5, 1.0}
inline Preset fig7(int panel) {
  const double dd = std::vector<double>{0.2, 0.5, 1.0}[static_cast<std::size_t>(panel)];
  Preset p{panel_name(7, panel), "concurrence vs acceleration, dd = " + format_double(dd), {}};
  for (Scenario s : kAccelerated) {
    p.curves.push_back({p.name + "_" + detector::to_string(s),
                        sweep(base(s, 0.5, dd, 0.5), SweepParameter::A, linspace(0.02, 2.0, 60))});
  }
  return p;
}

// dd_max vs dz at a in {0.1, 0.5, 1.0}, with the inertial curve
inline Preset fig8(int panel) {
  const double a = std::vector<double>{0.1, 0.5, 1.0}[static_cast<std::size_t>(panel)];
  Preset p{panel_name(8, panel), "harvesting range vs distance to the boundary, a = " + format_double(a), {}};
  const auto grid = linspace(0.1, 3.0, 15);
  p.curves.push_back({p.name + "_inertial",
                      threshold(sweep(base(Scenario::Inertial, 0.0, 1.0, 1.0),
                                      SweepParameter::DeltaZ, grid),
                                ThresholdTarget::DeltaDMax, 0.1, 6.0)});
  for (Scenario s : kAccelerated) {
    p.curves.push_back({p.name + "_" + detector::to_string(s),
                        threshold(sweep(base(s, a, 1.0, 1.0), SweepParameter::DeltaZ, grid),
                                  ThresholdTarget::DeltaDMax, 0.1, 6.0)});
  }
  return p;
}

// a_max vs dz at dd in {0.2, 0.5, 1.0}
inline Preset fig9(int panel) {
  const double dd = std::vector<double>{0.2, 0.5, 1.0}[static_cast<std::size_t>(panel)];
  Preset p{panel_name(9, panel), "acceleration limit vs distance to the boundary, dd = " + format_double(dd), {}};
  for (Scenario s : kAccelerated) {
    p.curves.push_back({p.name + "_" + detector::to_string(s),
                        threshold(sweep(base(s, 0.5, dd, 1.0), SweepParameter::DeltaZ,
                                        linspace(0.1, 3.0, 12)),
                                  ThresholdTarget::AMax, 0.02, 3.0)});
  }
  return p;
}

// concurrence vs dd at dz = 0.5, a in {0.1, 0.5, 1.0}
inline Preset fig10(int panel) {
  const double a = std::vector<double>{0.1, 0.5, 1.0}[static_cast<std::size_t>(panel)];
  Preset p{panel_name(10, panel), "concurrence vs detector separation, a = " + format_double(a), {}};
  for (Scenario s : kAccelerated) {
    p.curves.push_back({p.name + "_" + detector::to_string(s),
                        sweep(base(s, a, 1.0, 0.5), SweepParameter::DeltaD, linspace(0.05, 3.0, 60))});
  }
  return p;
}

inline Preset merge(std::string name, std::string description, const std::vector<Preset>& parts) {
  Preset out{std::move(name), std::move(description), {}};
  for (const auto& p : parts) out.curves.insert(out.curves.end(), p.curves.begin(), p.curves.end());
  return out;
}

}  // namespace presets

/// Names accepted by find_preset. fig5 to fig10 also accept a panel
/// letter (fig7b); without one all three panels are produced.
inline std::vector<std::string> preset_names() {
  std::vector<std::string> names{"fig1", "fig1a", "fig1b", "fig2", "fig2a", "fig2b", "fig3", "fig4"};
  for (int fig = 5; fig <= 10; ++fig) {
    names.push_back("fig" + std::to_string(fig));
    for (int panel = 0; panel < 3; ++panel) names.push_back(presets::panel_name(fig, panel));
  }
  return names;
}

inline std::optional<Preset> find_preset(const std::string& name) {
  using namespace presets;
  if (name == "fig1a") return fig1a();
  if (name == "fig1b") return fig1b();
  if (name == "fig1") return merge("fig1", "transition probability", {fig1a(), fig1b()});
  if (name == "fig2a") return fig2a();
  if (name == "fig2b") return fig2b();
  if (name == "fig2") return merge("fig2", "inertial concurrence", {fig2a(), fig2b()});
  if (name == "fig3") return fig3();
  if (name == "fig4") return fig4();
  using Panel = Preset (*)(int);
  const Panel panels[] = {fig5, fig6, fig7, fig8, fig9, fig10};
  for (int fig = 5; fig <= 10; ++fig) {
    const Panel make = panels[fig - 5];
    if (name == "fig" + std::to_string(fig)) {
      return merge(name, "all three panels", {make(0), make(1), make(2)});
    }
    for (int panel = 0; panel < 3; ++panel) {
      if (name == panel_name(fig, panel)) return make(panel);
    }
  }
  return std::nullopt;
}

}  // namespace udw::cli
