#pragma once

// Adaptive quadrature for the integral shapes the detector observables need:
//   * finite / semi-infinite / full-line 1D integrals under a Gaussian envelope
//   * Cauchy principal values through one simple pole
//   * 2D integrals over (u, s) regions whose integrand carries an i*eps
//     regularized singular curve, extrapolated to eps -> 0+
//
// All drivers share one globally adaptive Gauss-Kronrod (10, 21) core. Node
// tables come from Boost.Math; error estimates follow the QUADPACK heuristic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "udw/errors.hpp"
#include "udw/specfun.hpp"

namespace udw::quad {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-15;
  int max_subdivisions = 4000;
  /// Integrands are treated as zero where their Gaussian envelope drops below
  /// exp(-truncation_exponent).
  double truncation_exponent = 36.0;
  /// eps values (sigma = 1 units) at which regularized integrals are evaluated.
  std::vector<double> epsilon_schedule{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  /// Degree of the polynomial in eps used to extrapolate to eps -> 0.
  int extrapolation_order = 2;

  void validate() const {
    if (!(rel_tol > 0.0)) throw InputError("QuadratureSpec: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw InputError("QuadratureSpec: abs_tol must be >= 0");
    if (max_subdivisions < 1) throw InputError("QuadratureSpec: max_subdivisions must be >= 1");
    if (!(truncation_exponent >= 25.0)) {
      throw InputError("QuadratureSpec: truncation_exponent must be >= 25");
    }
    if (epsilon_schedule.empty()) throw InputError("QuadratureSpec: epsilon_schedule is empty");
    for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
      if (!(epsilon_schedule[i] > 0.0)) {
        throw InputError("QuadratureSpec: epsilon_schedule entries must be positive");
      }
      if (i > 0 && !(epsilon_schedule[i] < epsilon_schedule[i - 1])) {
        throw InputError("QuadratureSpec: epsilon_schedule must be strictly decreasing");
      }
    }
    if (extrapolation_order < 0 ||
        static_cast<std::size_t>(extrapolation_order) >= epsilon_schedule.size()) {
      throw InputError(
          "QuadratureSpec: extrapolation_order must be < number of epsilon values");
    }
  }

  static QuadratureSpec one_dimensional() { return QuadratureSpec{}; }
  static QuadratureSpec two_dimensional() {
    QuadratureSpec s;
    s.rel_tol = 1e-6;
    return s;
  }
};

struct IntegralResult {
  Complex value{};
  double error_estimate = 0.0;
  int subdivisions_used = 0;
  bool converged = true;
};

inline IntegralResult& operator+=(IntegralResult& lhs, const IntegralResult& rhs) {
  lhs.value += rhs.value;
  lhs.error_estimate += rhs.error_estimate;
  lhs.subdivisions_used += rhs.subdivisions_used;
  lhs.converged = lhs.converged && rhs.converged;
  return lhs;
}

inline IntegralResult operator*(Complex k, IntegralResult r) {
  r.value *= k;
  r.error_estimate *= std::abs(k);
  return r;
}

/// Integrand bound C * exp(-((x - center)/width)^2).
struct GaussianEnvelope {
  double center = 0.0;
  double width = 1.0;

  double radius(double truncation_exponent) const {
    return width * std::sqrt(truncation_exponent);
  }
};

/// A sample with its own error bar, returned by integrands that are themselves
/// integrals (the inner pass of a 2D rule).
struct Sample {
  Complex value{};
  double error = 0.0;
  bool converged = true;
  int subdivisions = 0;
};

namespace detail {

inline constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

struct Panel {
  double a = 0.0;
  double b = 0.0;
  Complex value{};
  double error = 0.0;
  bool splittable = true;
};

struct PanelOrder {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

template <class R>
Sample as_sample(R&& r) {
  if constexpr (std::is_same_v<std::decay_t<R>, Sample>) {
    return r;
  } else {
    return Sample{Complex(r), 0.0, true, 0};
  }
}

struct RuleTotals {
  int inner_failures = 0;
  int inner_subdivisions = 0;
};

template <class F>
Panel gauss_kronrod_21(F& f, double a, double b, RuleTotals& totals) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  Complex fv[21];
  double inner_err = 0.0;
  auto eval = [&](double x, int slot) {
    Sample s = as_sample(f(x));
    fv[slot] = s.value;
    if (!s.converged) ++totals.inner_failures;
    totals.inner_subdivisions += s.subdivisions;
    return s.error;
  };

  double inner_errs[21];
  inner_errs[0] = eval(center, 0);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    inner_errs[2 * i - 1] = eval(center - dx, static_cast<int>(2 * i - 1));
    inner_errs[2 * i] = eval(center + dx, static_cast<int>(2 * i));
  }

  Complex kronrod = fv[0] * wk[0];
  Complex gauss = 0.0;
  double res_abs = std::abs(fv[0]) * wk[0];
  inner_err += wk[0] * inner_errs[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const Complex pair = fv[2 * i - 1] + fv[2 * i];
    kronrod += pair * wk[i];
    res_abs += (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i])) * wk[i];
    inner_err += wk[i] * (inner_errs[2 * i - 1] + inner_errs[2 * i]);
    if (i % 2 == 1) gauss += pair * wg[i / 2];
  }
  const Complex mean = 0.5 * kronrod;
  double res_asc = wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    res_asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  }

  const double scale = std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  res_asc *= scale;
  res_abs *= scale;
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEpsilon)) {
    err = std::max(50.0 * kEpsilon * res_abs, err);
  }
  if (!std::isfinite(err) || !std::isfinite(kronrod.real()) || !std::isfinite(kronrod.imag())) {
    err = std::numeric_limits<double>::infinity();
  }

  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.error = err + scale * inner_err;
  return p;
}

inline bool finite_panel(const Panel& p) {
  return std::isfinite(p.value.real()) && std::isfinite(p.value.imag());
}

/// Globally adaptive bisection (QUADPACK QAG strategy) over [a, b] with the
/// interior cut points forced as panel boundaries.
template <class F>
IntegralResult adaptive(F&& f, double a, double b, std::span<const double> cuts, double rel_tol,
                        double abs_tol, int max_subdivisions) {
  IntegralResult out;
  if (!(b > a)) {
    out.value = 0.0;
    return out;
  }
  std::vector<double> edges{a};
  {
    std::vector<double> inner(cuts.begin(), cuts.end());
    std::sort(inner.begin(), inner.end());
    for (double c : inner) {
      if (c > edges.back() && c < b) edges.push_back(c);
    }
    edges.push_back(b);
  }

  RuleTotals totals;
  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
  std::vector<Panel> frozen;
  Complex total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gauss_kronrod_21(f, edges[i], edges[i + 1], totals);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  auto target = [&] { return std::max(rel_tol * std::abs(total), abs_tol); };
  int splits = 0;
  while (!heap.empty() && total_err > target()) {
    if (splits >= max_subdivisions) break;
    Panel worst = heap.top();
    if (!std::isfinite(worst.error) && splits > max_subdivisions / 2) break;
    const double mid = 0.5 * (worst.a + worst.b);
    const double tiny = 4.0 * kEpsilon * std::max(std::abs(worst.a), std::abs(worst.b));
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < tiny) {
      heap.pop();
      worst.splittable = false;
      frozen.push_back(worst);
      continue;
    }
    heap.pop();
    Panel left = gauss_kronrod_21(f, worst.a, mid, totals);
    Panel right = gauss_kronrod_21(f, mid, worst.b, totals);
    if (!finite_panel(left) || !finite_panel(right)) {
      // keep the coarser estimate; the result is reported as not converged
      worst.splittable = false;
      worst.error = std::numeric_limits<double>::infinity();
      total_err = std::numeric_limits<double>::infinity();
      frozen.push_back(worst);
      break;
    }
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  std::vector<Panel> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  Complex sum = 0.0;
  double err = 0.0;
  for (const Panel& p : all) {
    sum += p.value;
    err += p.error;
  }
  out.value = sum;
  out.error_estimate = err;
  out.subdivisions_used = splits + totals.inner_subdivisions;
  out.converged = std::isfinite(err) && std::isfinite(sum.real()) && std::isfinite(sum.imag()) &&
                  err <= std::max(rel_tol * std::abs(sum), abs_tol) && totals.inner_failures == 0;
  return out;
}

}  // namespace detail

/// Integral of f over [a, b]; breakpoints become forced panel edges.
template <class F>
IntegralResult integrate_interval(F&& f, double a, double b, const QuadratureSpec& spec,
                                  std::span<const double> breakpoints = {}) {
  return detail::adaptive(std::forward<F>(f), a, b, breakpoints, spec.rel_tol, spec.abs_tol,
                          spec.max_subdivisions);
}

/// Integral of f over [0, inf), truncated where the envelope falls below
/// exp(-truncation_exponent).
template <class F>
IntegralResult integrate_semi_infinite(F&& f, const QuadratureSpec& spec,
                                       GaussianEnvelope envelope = {},
                                       std::span<const double> breakpoints = {}) {
  const double hi = envelope.center + envelope.radius(spec.truncation_exponent);
  return integrate_interval(std::forward<F>(f), 0.0, std::max(hi, 0.0), spec, breakpoints);
}

/// Integral of f over the real line with two-sided Gaussian truncation.
template <class F>
IntegralResult integrate_full_line(F&& f, const QuadratureSpec& spec,
                                   GaussianEnvelope envelope = {},
                                   std::span<const double> breakpoints = {}) {
  const double r = envelope.radius(spec.truncation_exponent);
  return integrate_interval(std::forward<F>(f), envelope.center - r, envelope.center + r, spec,
                            breakpoints);
}

/// Estimate of lim (x - pole) f(x) from a symmetric difference.
template <class F>
Complex estimate_residue(F& f, double pole, double window) {
  const double h = 1e-4 * window;
  return 0.5 * h * (Complex(f(pole + h)) - Complex(f(pole - h)));
}

/// Cauchy principal value of f over [lo, hi] through a simple pole.
///
/// f = r/(x - pole) + smooth. On the symmetric window [pole - w, pole + w]
/// the r/(x - pole) part integrates to zero, so only the even combination
/// f(pole + t) + f(pole - t) is integrated there; the rest of [lo, hi] is
/// integrated directly. window <= 0 selects w = half the distance from the
/// pole to the nearer edge.
template <class F>
IntegralResult integrate_pv(F&& f, double pole, double lo, double hi, const QuadratureSpec& spec,
                            double window = 0.0) {
  if (!(pole > lo && pole < hi)) {
    throw InputError("integrate_pv: pole " + std::to_string(pole) + " outside (" +
                     std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  const double max_window = std::min(pole - lo, hi - pole);
  const double w = window > 0.0 ? std::min(window, max_window) : 0.5 * max_window;
  const Complex residue = estimate_residue(f, pole, w);
  if (!std::isfinite(residue.real()) || !std::isfinite(residue.imag())) {
    throw InputError("integrate_pv: residue estimate is not finite");
  }
  // Use t' = fl(pole + t) - pole so both samples sit exactly t' either side
  // of the pole in floating point; otherwise the r/t pieces stop cancelling
  // once t is near the rounding level of the pole.
  auto even = [&](double t) {
    const double up = pole + t;
    const double dt = up - pole;
    return Complex(f(up)) + Complex(f(pole - dt));
  };
  IntegralResult r = integrate_interval(even, 0.0, w, spec);
  r += integrate_interval(f, lo, pole - w, spec);
  r += integrate_interval(f, pole + w, hi, spec);
  r.converged = r.converged && r.error_estimate <= std::max(spec.rel_tol * std::abs(r.value),
                                                            spec.abs_tol);
  return r;
}

/// Principal value over [0, inf) under a Gaussian envelope. The truncation
/// point is pushed out to at least pole + 5 window widths.
template <class F>
IntegralResult integrate_pv(F&& f, double pole, const QuadratureSpec& spec,
                            GaussianEnvelope envelope = {}, double window = 0.0) {
  if (!(pole > 0.0) || !std::isfinite(pole)) {
    throw InputError("integrate_pv: pole must lie inside (0, inf)");
  }
  const double w = window > 0.0 ? std::min(window, 0.5 * pole) : 0.5 * pole;
  const double hi =
      std::max(envelope.center + envelope.radius(spec.truncation_exponent), pole + 5.0 * w);
  return integrate_pv(std::forward<F>(f), pole, 0.0, hi, spec, w);
}

/// Sign changes of a real function on [lo, hi], located by a uniform scan
/// and refined with TOMS 748.
template <class G>
void locate_roots(G&& g, double lo, double hi, int scan_points, std::vector<double>& roots) {
  if (!(hi > lo) || scan_points < 2) return;
  const double step = (hi - lo) / scan_points;
  double x0 = lo;
  double g0 = g(x0);
  for (int i = 1; i <= scan_points; ++i) {
    const double x1 = (i == scan_points) ? hi : lo + i * step;
    const double g1 = g(x1);
    if (g0 == 0.0) {
      roots.push_back(x0);
    } else if ((g0 < 0.0) != (g1 < 0.0) && g1 != 0.0) {
      std::uintmax_t iters = 100;
      auto tol = [](double l, double r) { return std::abs(r - l) <= 1e-15 * std::max(1.0, std::abs(l)); };
      const auto bracket = boost::math::tools::toms748_solve(g, x0, x1, g0, g1, tol, iters);
      roots.push_back(0.5 * (bracket.first + bracket.second));
    }
    x0 = x1;
    g0 = g1;
  }
}

/// Polynomial extrapolation to eps -> 0 of values computed along the
/// spec's epsilon schedule.
///
/// The value is Neville's degree-p interpolant through the p+1 smallest eps.
/// The reported error adds the quadrature errors (weighted by the Lagrange
/// coefficients) to the gap between that value and the same-degree estimate
/// from the preceding window of points (or degree p-1 when no earlier window
/// exists); the result is flagged when that gap exceeds the tolerance.
template <class Eval>
IntegralResult extrapolate_epsilon(Eval&& eval_at, const QuadratureSpec& spec,
                                   std::vector<IntegralResult>* raw = nullptr) {
  spec.validate();
  const auto& eps = spec.epsilon_schedule;
  const std::size_t n = eps.size();
  std::vector<IntegralResult> samples;
  samples.reserve(n);
  for (double e : eps) samples.push_back(eval_at(e));
  if (raw) *raw = samples;

  auto lagrange_at_zero = [&](std::size_t first, std::size_t count) {
    std::vector<double> w(count, 1.0);
    for (std::size_t j = 0; j < count; ++j) {
      for (std::size_t k = 0; k < count; ++k) {
        if (k != j) w[j] *= eps[first + k] / (eps[first + k] - eps[first + j]);
      }
    }
    return w;
  };
  auto extrapolate = [&](std::size_t first, std::size_t count, double* quad_err) {
    const auto w = lagrange_at_zero(first, count);
    Complex v = 0.0;
    double e = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      v += w[j] * samples[first + j].value;
      e += std::abs(w[j]) * samples[first + j].error_estimate;
    }
    if (quad_err) *quad_err = e;
    return v;
  };

  const std::size_t p = static_cast<std::size_t>(spec.extrapolation_order);
  double quad_err = 0.0;
  const Complex best = extrapolate(n - (p + 1), p + 1, &quad_err);
  Complex previous;
  if (n >= p + 2) {
    previous = extrapolate(n - (p + 2), p + 1, nullptr);
  } else if (p > 0) {
    previous = extrapolate(n - p, p, nullptr);
  } else {
    previous = samples[n - 1].value;
  }
  const double gap = std::abs(best - previous);

  IntegralResult out;
  out.value = best;
  out.error_estimate = gap + quad_err;
  out.converged = true;
  for (const auto& s : samples) {
    out.subdivisions_used += s.subdivisions_used;
    out.converged = out.converged && s.converged;
  }
  const double tolerance = std::max(spec.rel_tol * std::abs(best), spec.abs_tol);
  out.converged = out.converged && out.error_estimate <= tolerance;
  return out;
}

/// Integration region for the nested 2D rule: u in [u_lo, u_hi] outside,
/// s in s_range(u) inside, with optional singular s-locations per u.
struct Region2D {
  double u_lo = 0.0;
  double u_hi = 0.0;
  std::function<std::pair<double, double>(double)> s_range;
  std::function<void(double, std::vector<double>&)> s_breakpoints;
};

/// Region where exp(-(u - s/2)^2 - s^2/4) >= exp(-T): the support of the
/// product of two unit Gaussian switchings chi(u) chi(u - s).
inline Region2D gaussian_window_region(double truncation_exponent, bool half_line) {
  const double T = truncation_exponent;
  Region2D r;
  r.u_lo = half_line ? -std::sqrt(T) : -std::sqrt(2.0 * T);
  r.u_hi = std::sqrt(2.0 * T);
  r.s_range = [T, half_line](double u) {
    const double disc = std::sqrt(std::max(0.0, 2.0 * T - u * u));
    double lo = u - disc;
    const double hi = u + disc;
    if (half_line) lo = std::max(lo, 0.0);
    return std::pair{lo, std::max(lo, hi)};
  };
  return r;
}

/// 2D integral at one fixed eps: adaptive in s (inside) and u (outside).
/// outer_cuts are forced panel edges of the outer rule.
template <class F>
IntegralResult integrate_2d_fixed(F& f, const Region2D& region, double eps,
                                  const QuadratureSpec& spec,
                                  std::span<const double> outer_cuts = {}) {
  const double inner_rel = 0.01 * spec.rel_tol;
  const double outer_rel = 0.1 * spec.rel_tol;
  auto inner = [&](double u) {
    const auto [lo, hi] = region.s_range(u);
    std::vector<double> cuts;
    if (region.s_breakpoints) region.s_breakpoints(u, cuts);
    auto g = [&](double s) { return f(u, s, eps); };
    const IntegralResult r =
        detail::adaptive(g, lo, hi, cuts, inner_rel, spec.abs_tol, spec.max_subdivisions);
    return Sample{r.value, r.error_estimate, r.converged, r.subdivisions_used};
  };
  return detail::adaptive(inner, region.u_lo, region.u_hi, outer_cuts, outer_rel, spec.abs_tol,
                          spec.max_subdivisions);
}

/// 2D integral of f(u, s, eps) over the region, evaluated along the eps
/// schedule and extrapolated to eps -> 0+.
template <class F>
IntegralResult integrate_2d_regularized(F&& f, const Region2D& region, const QuadratureSpec& spec,
                                        std::vector<IntegralResult>* raw = nullptr) {
  spec.validate();
  return extrapolate_epsilon(
      [&](double eps) { return integrate_2d_fixed(f, region, eps, spec); }, spec, raw);
}

/// Same as integrate_2d_regularized on the default Gaussian window over
/// u in R, s in [0, inf).
template <class F>
IntegralResult integrate_2d_regularized(F&& f, const QuadratureSpec& spec) {
  return integrate_2d_regularized(std::forward<F>(f),
                                  gaussian_window_region(spec.truncation_exponent, true), spec);
}

}  // namespace udw::quad
