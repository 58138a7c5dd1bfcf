#pragma once

// Concurrence of the two-detector state, parameter sweeps and threshold
// (dd_max, a_max) search.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "udw/detector.hpp"
#include "udw/errors.hpp"
#include "udw/quad.hpp"

namespace udw::harvest {

using detector::Scenario;
using detector::ScenarioConfig;
using quad::IntegralResult;
using quad::QuadratureSpec;

/// 2 max(0, |X| - sqrt(P_A P_B)).
inline double concurrence(double p_a, double p_b, Complex x) {
  if (p_a < 0.0 || p_b < 0.0) throw InputError("concurrence: probabilities must be >= 0");
  return 2.0 * std::max(0.0, std::abs(x) - std::sqrt(p_a * p_b));
}

/// Tolerances for the 1D (probability) and 2D (correlator) integrals.
struct Tolerances {
  QuadratureSpec p = QuadratureSpec::one_dimensional();
  QuadratureSpec x = QuadratureSpec::two_dimensional();

  void validate() const {
    p.validate();
    x.validate();
  }
};

struct HarvestResult {
  double p_a = 0.0;
  double p_b = 0.0;
  Complex x{};
  std::optional<Complex> c_corr;
  double err_p = 0.0;
  double err_x = 0.0;
  double err_c = 0.0;
  bool converged = true;

  double concurrence() const { return harvest::concurrence(p_a, p_b, x); }
};

/// Both probabilities come from one evaluation: the two worldlines of every
/// scenario are congruent and sit at the same height, which verify_equal_p
/// checks.
inline HarvestResult evaluate(const ScenarioConfig& cfg, const Tolerances& tol,
                              bool with_p = true, bool with_x = true, bool with_c = false) {
  cfg.validate();
  HarvestResult r;
  if (with_p) {
    const IntegralResult p = detector::pd_correlator(cfg, tol.p);
    r.p_a = r.p_b = p.value.real();
    r.err_p = p.error_estimate;
    r.converged = r.converged && p.converged;
  }
  if (with_x) {
    const IntegralResult x = detector::x_correlator(cfg, tol.x);
    r.x = x.value;
    r.err_x = x.error_estimate;
    r.converged = r.converged && x.converged;
  }
  if (with_c) {
    const IntegralResult c = detector::c_correlator(cfg, tol.x);
    r.c_corr = c.value;
    r.err_c = c.error_estimate;
    r.converged = r.converged && c.converged;
  }
  return r;
}

/// Checks P_A = P_B by running the trajectory-level oracle on both
/// worldlines. Throws if they differ by more than rel (relative).
inline void verify_equal_p(const ScenarioConfig& cfg, const QuadratureSpec& spec,
                           double rel = 1e-9) {
  cfg.validate();
  const auto pa = detector::pd_raw_oracle(cfg.trajectory_a(), cfg.omega, spec);
  const auto pb = detector::pd_raw_oracle(cfg.trajectory_b(), cfg.omega, spec);
  const double scale = std::max(std::abs(pa.value), std::abs(pb.value));
  if (std::abs(pa.value - pb.value) > rel * scale) {
    throw InputError("P_A and P_B differ for scenario " + std::string(to_string(cfg.scenario)));
  }
}

// ---------------------------------------------------------------------------
// Worker pool

/// Runs job(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; the first exception is rethrown after all
/// workers stop.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParameter { A, DeltaD, DeltaZ };

inline const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::A: return "a";
    case SweepParameter::DeltaD: return "dd";
    case SweepParameter::DeltaZ: return "dz";
  }
  return "?";
}

inline std::optional<SweepParameter> sweep_parameter_from_string(const std::string& s) {
  if (s == "a") return SweepParameter::A;
  if (s == "dd") return SweepParameter::DeltaD;
  if (s == "dz") return SweepParameter::DeltaZ;
  return std::nullopt;
}

struct Quantities {
  bool p = true;
  bool x = true;
  bool c = false;
  bool concurrence = true;

  bool need_p() const { return p || concurrence; }
  bool need_x() const { return x || concurrence; }
  bool operator==(const Quantities&) const = default;
};

inline ScenarioConfig with_value(ScenarioConfig cfg, SweepParameter p, double v) {
  switch (p) {
    case SweepParameter::A: cfg.a = v; break;
    case SweepParameter::DeltaD: cfg.delta_d = v; break;
    case SweepParameter::DeltaZ: cfg.delta_z = v; break;
  }
  return cfg;
}

struct SweepSpec {
  ScenarioConfig cfg_template;
  SweepParameter swept = SweepParameter::DeltaZ;
  std::vector<double> grid;
  Quantities quantities;

  void validate() const {
    if (grid.empty()) throw InputError("sweep: grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) throw InputError("sweep: grid must be strictly increasing");
    }
    for (double v : grid) with_value(cfg_template, swept, v).validate();
  }
};

struct SweepRow {
  double swept_value = 0.0;
  HarvestResult result;
  bool converged = true;
  std::string error;  // set when the row raised instead of returning
};

struct SweepTable {
  std::vector<SweepRow> rows;

  bool all_converged() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; });
  }
};

/// One row per grid point. Rows are independent; a failure in one row is
/// recorded on that row and never stops the sweep.
inline SweepTable run_sweep(const SweepSpec& spec, const Tolerances& tol, int threads = 1) {
  spec.validate();
  tol.validate();
  if (spec.cfg_template.scenario != Scenario::Inertial && spec.quantities.need_p()) {
    verify_equal_p(with_value(spec.cfg_template, spec.swept, spec.grid.front()), tol.p);
  }
  SweepTable table;
  table.rows.resize(spec.grid.size());
  parallel_for(spec.grid.size(), threads, [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.swept_value = spec.grid[i];
    try {
      const ScenarioConfig cfg = with_value(spec.cfg_template, spec.swept, spec.grid[i]);
      row.result = evaluate(cfg, tol, spec.quantities.need_p(), spec.quantities.need_x(),
                            spec.quantities.c);
      row.converged = row.result.converged;
    } catch (const std::exception& e) {
      row.converged = false;
      row.error = e.what();
    }
  });
  return table;
}

// ---------------------------------------------------------------------------
// Thresholds

enum class ThresholdStatus {
  Found,
  NoThreshold,  // no harvesting at the lower end of the bracket
  NotBracketed  // still harvesting at the (expanded) upper end
};

inline const char* to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::Found: return "found";
    case ThresholdStatus::NoThreshold: return "no_threshold";
    case ThresholdStatus::NotBracketed: return "not_bracketed";
  }
  return "?";
}

struct ThresholdResult {
  double value = std::nan("");
  double lo = std::nan("");
  double hi = std::nan("");
  double tolerance_achieved = std::nan("");
  int iterations = 0;
  ThresholdStatus status = ThresholdStatus::Found;
  bool multi_crossing = false;
  bool converged = true;  // every integral along the way converged
  std::string message;
};

struct ThresholdOptions {
  double tol = 1e-3;
  int scan_points = 6;
  int max_expansions = 4;
  double expansion_factor = 2.0;
  int threads = 1;
};

/// A sample of h(x) = |X| - sqrt(P_A P_B); positive means entanglement is
/// harvested.
struct Margin {
  double h = 0.0;
  bool converged = true;
};

/// Locates the smallest x in the bracket where h changes from > 0 to <= 0.
///
/// h is first sampled on scan_points + 1 evenly spaced points (in parallel);
/// the first sign change is then bisected to width tol. More than one sign
/// change in the scan sets multi_crossing. If h is still positive at hi,
/// the bracket is widened by expansion_factor up to max_expansions times.
inline ThresholdResult bisect_threshold(const std::function<Margin(double)>& h, double lo,
                                        double hi, const ThresholdOptions& opt) {
  if (!(hi > lo)) throw InputError("threshold: bracket must satisfy lo < hi");
  if (!(opt.tol > 0.0)) throw InputError("threshold: tol must be > 0");
  if (opt.scan_points < 1) throw InputError("threshold: scan_points must be >= 1");
  ThresholdResult out;
  auto sample = [&](double x) {
    const Margin m = h(x);
    out.converged = out.converged && m.converged;
    return m.h;
  };

  std::vector<double> xs, hs;
  for (int round = 0;; ++round) {
    const int n = opt.scan_points;
    xs.assign(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<Margin> ms(xs.size());
    for (int i = 0; i <= n; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;
    parallel_for(xs.size(), opt.threads, [&](std::size_t i) { ms[i] = h(xs[i]); });
    hs.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      hs[i] = ms[i].h;
      out.converged = out.converged && ms[i].converged;
    }
    out.iterations += static_cast<int>(xs.size());
    if (!(hs.front() > 0.0)) {
      out.status = ThresholdStatus::NoThreshold;
      out.lo = lo;
      out.hi = hi;
      out.message = "no entanglement harvested at the lower end of the bracket";
      return out;
    }
    if (hs.back() > 0.0 && round < opt.max_expansions) {
      const bool any_zero = std::any_of(hs.begin(), hs.end(), [](double v) { return !(v > 0.0); });
      if (!any_zero) {
        hi = lo + (hi - lo) * opt.expansion_factor;
        continue;
      }
    }
    break;
  }

  std::size_t first = xs.size();
  int sign_changes = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if ((hs[i - 1] > 0.0) != (hs[i] > 0.0)) {
      ++sign_changes;
      if (first == xs.size()) first = i;
    }
  }
  if (first == xs.size()) {
    out.status = ThresholdStatus::NotBracketed;
    out.lo = xs.back();
    out.hi = xs.back();
    out.message = "harvesting persists across the expanded bracket";
    return out;
  }
  if (sign_changes > 1) {
    out.multi_crossing = true;
    out.message = "multiple sign changes in the bracket; reporting the smallest crossing";
  }
  double a = xs[first - 1], b = xs[first];
  while (b - a > opt.tol) {
    const double mid = 0.5 * (a + b);
    ++out.iterations;
    if (sample(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  out.status = ThresholdStatus::Found;
  out.lo = a;
  out.hi = b;
  out.value = 0.5 * (a + b);
  out.tolerance_achieved = b - a;
  return out;
}

/// Largest harvesting separation at fixed (a, dz, Omega). P does not depend
/// on dd, so it is computed once.
inline ThresholdResult find_ddmax(const ScenarioConfig& cfg, double lo, double hi,
                                  const Tolerances& tol, const ThresholdOptions& opt = {}) {
  tol.validate();
  ScenarioConfig base = cfg;
  base.delta_d = lo;
  base.validate();
  if (base.scenario != Scenario::Inertial) verify_equal_p(base, tol.p);
  const IntegralResult p = detector::pd_correlator(base, tol.p);
  const double sqrt_pp = std::abs(p.value.real());
  return bisect_threshold(
      [&](double dd) {
        ScenarioConfig c = base;
        c.delta_d = dd;
        const IntegralResult x = detector::x_correlator(c, tol.x);
        return Margin{std::abs(x.value) - sqrt_pp, x.converged && p.converged};
      },
      lo, hi, opt);
}

/// Largest harvesting acceleration at fixed (dd, dz, Omega); P is
/// recomputed at every a.
inline ThresholdResult find_amax(const ScenarioConfig& cfg, double lo, double hi,
                                 const Tolerances& tol, const ThresholdOptions& opt = {}) {
  tol.validate();
  if (cfg.scenario == Scenario::Inertial) {
    throw InputError("find_amax: scenario must be an accelerated one");
  }
  if (!(lo > 0.0)) throw InputError("find_amax: bracket must start at a > 0");
  ScenarioConfig base = cfg;
  base.a = lo;
  base.validate();
  verify_equal_p(base, tol.p);
  return bisect_threshold(
      [&](double a) {
        ScenarioConfig c = base;
        c.a = a;
        const IntegralResult p = detector::pd_correlator(c, tol.p);
        const IntegralResult x = detector::x_correlator(c, tol.x);
        return Margin{std::abs(x.value) - std::abs(p.value.real()), x.converged && p.converged};
      },
      lo, hi, opt);
}

}  // namespace udw::harvest
