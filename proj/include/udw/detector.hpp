#pragma once

// Detector observables to leading order in the coupling, per lambda^2 with
// sigma = 1:
//   P   excitation probability of one detector
//   X   nonlocal |00> <-> |11> correlator of the pair
//   C   cross term <1_A 0_B| rho |0_A 1_B>
//
// The pair correlators are 2D integrals over u = tau, s = tau - tau'. Along
// every worldline family here t(tau) is the same function for A and B, so
// the time ordering in X reduces to s >= 0 with both assignments of the two
// detectors to (u, u - s):
//
//   X = -1/(4 pi^2) int du int_0^inf ds f(u, s)
//         sum_{AB, BA} [ 1/(k - i eps) - 1/(k + 4 dz^2 - i eps) ]
//   f(u, s) = exp(-u^2 + u s - s^2/2 - i Omega (2u - s))
//
// with k = |dx|^2 - dt^2 the invariant interval between the two events
// ("AB": B at u, A at u - s). The kernels below are rewritten so that no
// term grows like exp(a |u|) before cancelling.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "udw/errors.hpp"
#include "udw/field.hpp"
#include "udw/quad.hpp"
#include "udw/specfun.hpp"

namespace udw::detector {

using field::Trajectory;
using field::TrajectoryKind;
using quad::IntegralResult;
using quad::QuadratureSpec;

inline constexpr double kPi = std::numbers::pi;
/// Configurations closer to the plate than this are rejected.
inline constexpr double kMinDeltaZ = 0.01;

enum class Scenario { Inertial, Parallel, AntiParallel, Perpendicular };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Inertial: return "inertial";
    case Scenario::Parallel: return "parallel";
    case Scenario::AntiParallel: return "antiparallel";
    case Scenario::Perpendicular: return "perpendicular";
  }
  return "?";
}

inline std::optional<Scenario> scenario_from_string(const std::string& name) {
  if (name == "inertial") return Scenario::Inertial;
  if (name == "parallel") return Scenario::Parallel;
  if (name == "antiparallel") return Scenario::AntiParallel;
  if (name == "perpendicular") return Scenario::Perpendicular;
  return std::nullopt;
}

struct ScenarioConfig {
  Scenario scenario = Scenario::Inertial;
  double a = 0.0;
  double delta_d = 1.0;
  double delta_z = 1.0;
  double omega = 0.1;

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(a) || !finite(delta_d) || !finite(delta_z) || !finite(omega)) {
      throw InputError("a_sigma, dd_over_sigma, dz_over_sigma, omega_sigma must be finite");
    }
    if (scenario == Scenario::Inertial && a != 0.0) {
      throw InputError("a_sigma must be 0 when scenario = inertial");
    }
    if (scenario != Scenario::Inertial && a == 0.0) {
      throw InputError("scenario = Inertial required when a = 0");
    }
    if (a < 0.0) throw InputError("a_sigma must be >= 0");
    if (!(delta_d > 0.0)) throw InputError("dd_over_sigma must be > 0");
    if (!(omega > 0.0)) throw InputError("omega_sigma must be > 0");
    if (!(delta_z > 0.0) || delta_z < kMinDeltaZ) {
      throw OnBoundaryError(
          "on-boundary regime: dz_over_sigma must be >= 1/100 (detectors closer to the "
          "plate are treated as lying on it), got " +
          std::to_string(delta_z));
    }
  }

  Trajectory trajectory_a() const { return {kind(true), a, delta_d, delta_z}; }
  Trajectory trajectory_b() const { return {kind(false), a, delta_d, delta_z}; }

 private:
  TrajectoryKind kind(bool first) const {
    switch (scenario) {
      case Scenario::Inertial: return first ? TrajectoryKind::RestA : TrajectoryKind::RestB;
      case Scenario::Parallel: return first ? TrajectoryKind::ParallelA : TrajectoryKind::ParallelB;
      case Scenario::AntiParallel:
        return first ? TrajectoryKind::AntiParallelA : TrajectoryKind::AntiParallelB;
      case Scenario::Perpendicular: return first ? TrajectoryKind::PerpA : TrajectoryKind::PerpB;
    }
    return TrajectoryKind::RestA;
  }
};

// ---------------------------------------------------------------------------
// Transition probability

/// Free-space inertial part (1/4pi)[e^{-W^2} - sqrt(pi) W erfc(W)].
inline double pd_free_inertial(double omega) {
  return (std::exp(-omega * omega) -
          std::sqrt(kPi) * omega * specfun::erfc_real(omega)) /
         (4.0 * kPi);
}

/// Closed-form P of a detector at rest a distance dz from the plate.
///
/// The boundary term e^{-dz^2}{Im[e^{2i W dz} Erf(i dz + W)] - sin 2 W dz}
/// equals -e^{-W^2} Im w(-dz + i W); the w form does not overflow at large dz.
inline double pd_inertial(double omega, double delta_z) {
  if (!(omega > 0.0)) throw InputError("pd_inertial: omega must be > 0");
  if (!(delta_z > 0.0)) throw OnBoundaryError("pd_inertial: delta_z must be > 0");
  const Complex w = specfun::faddeeva_w({-delta_z, omega});
  return pd_free_inertial(omega) +
         std::exp(-omega * omega) * w.imag() / (8.0 * std::sqrt(kPi) * delta_z);
}

namespace detail {

// 1/x^2 - 1/sinh^2 x
inline double inv_sq_minus_inv_sinh_sq(double x) {
  if (std::abs(x) < 0.05) {
    const double x2 = x * x;
    return 1.0 / 3.0 +
           x2 * (-1.0 / 15.0 + x2 * (2.0 / 189.0 + x2 * (-1.0 / 675.0 + x2 * 2.0 / 10395.0)));
  }
  const double sh = std::sinh(x);
  return 1.0 / (x * x) - 1.0 / (sh * sh);
}

}  // namespace detail

/// P of a uniformly accelerated detector (acceleration parallel to the
/// plate) as a sum of: a regular integral, a principal value through
/// s* = asinh(a dz), the free inertial closed form, and a surface term at s*.
inline IntegralResult pd_accelerated(double omega, double a, double delta_z,
                                     const QuadratureSpec& spec) {
  spec.validate();
  if (!(omega > 0.0)) throw InputError("pd_accelerated: omega must be > 0");
  if (!(a > 0.0)) throw InputError("pd_accelerated: a must be > 0");
  if (!(delta_z > 0.0)) throw OnBoundaryError("pd_accelerated: delta_z must be > 0");

  const double beta = 2.0 * omega / a;
  const double alpha = 1.0 / (a * a);
  const double pref = a / (4.0 * std::pow(kPi, 1.5));
  const quad::GaussianEnvelope env{0.0, a};

  auto regular = [&](double s) {
    return std::cos(beta * s) * std::exp(-alpha * s * s) * detail::inv_sq_minus_inv_sinh_sq(s);
  };
  // PV of cos(beta s) e^{-alpha s^2}/(sinh^2 s - sinh^2 p), p = asinh(a dz).
  // With sinh^2 s - sinh^2 p = sinh(s - p) sinh(s + p) the integrand is
  // e^{-alpha s^2} m(s)/(s^2 - p^2), m smooth. The pole pair at +-p is taken
  // out analytically through
  //   PV int_0^inf e^{-alpha s^2}/(s^2 - p^2) ds = -(sqrt(pi)/p) F(sqrt(alpha) p)
  // (F Dawson's integral), which avoids the 1/(a dz)^2 spike near s = 0
  // that a generic PV fold would integrate numerically.
  const double pole = std::asinh(a * delta_z);
  auto x_over_sinh = [](double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return x / std::sinh(x);
  };
  auto m = [&](double s) {
    return std::cos(beta * s) * x_over_sinh(s - pole) * x_over_sinh(s + pole);
  };
  const double m_pole = m(pole);
  auto remainder = [&](double s) {
    return std::exp(-alpha * s * s) * (m(s) - m_pole) / ((s - pole) * (s + pole));
  };
  const double sqrt_alpha_p = std::sqrt(alpha) * pole;
  const double dawson =
      0.5 * std::sqrt(kPi) * specfun::faddeeva_w(Complex(sqrt_alpha_p, 0.0)).imag();
  const double singular = -std::sqrt(kPi) / pole * dawson * m_pole;
  const double hi = std::max(env.radius(spec.truncation_exponent), 2.0 * pole);
  const double cut[] = {pole};

  auto evaluate = [&](const QuadratureSpec& piece_spec) {
    IntegralResult total = pref * quad::integrate_semi_infinite(regular, piece_spec, env);
    IntegralResult pv = quad::integrate_interval(remainder, 0.0, hi, piece_spec, cut);
    pv.value += singular;
    total += pref * pv;
    total.value += pd_free_inertial(omega);
    total.value += a / (4.0 * std::sqrt(kPi)) * std::exp(-alpha * pole * pole) *
                   std::sin(beta * pole) / std::sinh(2.0 * pole);
    total.value.imag(0.0);
    return total;
  };
  // Close to the plate the pieces cancel to a small total, so they are
  // re-run with an absolute budget derived from the target on the total.
  QuadratureSpec piece_spec = spec;
  IntegralResult total = evaluate(piece_spec);
  for (int pass = 0; pass < 3; ++pass) {
    const double target = std::max(spec.rel_tol * std::abs(total.value), spec.abs_tol);
    if (!total.converged || total.error_estimate <= target) break;
    piece_spec.rel_tol = 1e-15;
    piece_spec.abs_tol = 0.25 * target / pref;
    if (pass > 0) piece_spec.abs_tol *= 0.5 * target / total.error_estimate;
    total = evaluate(piece_spec);
  }
  total.converged =
      total.converged &&
      total.error_estimate <= std::max(spec.rel_tol * std::abs(total.value), spec.abs_tol);
  return total;
}

/// Free-space part of pd_accelerated (the regular integral plus the free
/// inertial closed form).
inline IntegralResult pd_accelerated_free(double omega, double a, const QuadratureSpec& spec) {
  const double beta = 2.0 * omega / a;
  const double alpha = 1.0 / (a * a);
  auto regular = [&](double s) {
    return std::cos(beta * s) * std::exp(-alpha * s * s) * detail::inv_sq_minus_inv_sinh_sq(s);
  };
  IntegralResult r = (a / (4.0 * std::pow(kPi, 1.5))) *
                     quad::integrate_semi_infinite(regular, spec, {0.0, a});
  r.value += pd_free_inertial(omega);
  return r;
}

/// Reference P straight from the Wightman function along one worldline:
///   P = sqrt(pi) int ds e^{-i W s} e^{-s^2/4} W(x(s/2), x(-s/2); eps)
/// with eps -> 0+ by extrapolation. The imaginary part is kept so callers
/// can check it vanishes.
inline IntegralResult pd_raw_oracle(const Trajectory& traj, double omega,
                                    const QuadratureSpec& spec, bool include_image = true) {
  spec.validate();
  std::vector<double> cuts{0.0};
  auto interval = [&](double s, bool mirror) {
    return field::regularized_interval(traj.event_at(0.5 * s), traj.event_at(-0.5 * s), 0.0,
                                       mirror)
        .real();
  };
  const double R = 2.0 * std::sqrt(spec.truncation_exponent);
  if (include_image) {
    quad::locate_roots([&](double s) { return interval(s, true); }, 1e-12, R, 64, cuts);
    quad::locate_roots([&](double s) { return interval(s, true); }, -R, -1e-12, 64, cuts);
  }
  auto at_eps = [&](double eps) {
    auto integrand = [&](double s) {
      const field::Event x1 = traj.event_at(0.5 * s);
      const field::Event x2 = traj.event_at(-0.5 * s);
      Complex w = field::wightman_free(x1, x2, eps);
      if (include_image) w -= field::wightman_image(x1, x2, eps);
      return std::sqrt(kPi) * std::exp(Complex(-0.25 * s * s, -omega * s)) * w;
    };
    return quad::integrate_full_line(integrand, spec, {0.0, 2.0}, cuts);
  };
  return quad::extrapolate_epsilon(at_eps, spec);
}

// ---------------------------------------------------------------------------
// Pair kernels

enum class Ordering { Both, AB, BA };

struct XOptions {
  bool include_image = true;
  Ordering ordering = Ordering::Both;
  /// Integrate u on the inside and s on the outside.
  bool swap_order = false;
};

/// Interval k = |x_A - x_B|^2 - (t_A - t_B)^2 between the two detectors, one
/// at proper time u and the other at u - s. ab = true puts B at u.
struct PairKernel {
  Scenario scenario;
  double a;
  double dd;

  double operator()(bool ab, double u, double s) const {
    if (scenario == Scenario::Inertial) return dd * dd - s * s;
    const double sh = std::sinh(0.5 * a * s);
    const double timelike = 4.0 * sh * sh / (a * a);
    auto bump = [this](double tau) {
      const double h = std::sinh(0.5 * a * tau);
      return 2.0 * h * h / a;
    };
    switch (scenario) {
      case Scenario::Parallel: {
        const double dx0 = 2.0 / a * std::sinh(0.5 * a * (2.0 * u - s)) * sh;
        const double d = ab ? dd : -dd;
        return dd * dd + 2.0 * d * dx0 - timelike;
      }
      case Scenario::AntiParallel: {
        const double c1 = bump(u);
        const double c2 = bump(u - s);
        return dd * dd + 2.0 * dd * (c1 + c2) + 4.0 * c1 * c2 - timelike;
      }
      case Scenario::Perpendicular: {
        const double c1 = bump(u);
        const double c2 = bump(u - s);
        return dd * dd + 2.0 * dd * (ab ? c1 : c2) + 2.0 * c1 * c2 - timelike;
      }
      default: break;
    }
    return 0.0;
  }
};

/// The kernels in the form a^2 k, written in terms of cosh of the proper
/// times. Used to cross-check PairKernel.
struct PrintedKernels {
  double a;
  double dd;

  double f_ab(double u, double s) const {
    return 2.0 + a * a * dd * dd - 2.0 * std::cosh(a * s) + 2.0 * a * dd * std::cosh(a * u) -
           2.0 * a * dd * std::cosh(a * (u - s));
  }
  double f_ba(double u, double s) const {
    return 2.0 + a * a * dd * dd - 2.0 * std::cosh(a * s) - 2.0 * a * dd * std::cosh(a * u) +
           2.0 * a * dd * std::cosh(a * (u - s));
  }
  double g(double u, double s) const {
    return 2.0 + std::pow(2.0 - a * dd, 2) + 2.0 * std::cosh(a * s - 2.0 * a * u) +
           (2.0 * a * dd - 4.0) * (std::cosh(a * u) + std::cosh(a * u - a * s));
  }
  double h_ab(double u, double s) const {
    return 3.0 + std::pow(a * dd - 1.0, 2) - 2.0 * std::cosh(a * (u - s)) -
           2.0 * (1.0 - a * dd) * std::cosh(a * u) +
           2.0 * std::sinh(a * u) * std::sinh(a * (u - s));
  }
  double h_ba(double u, double s) const {
    return 3.0 + std::pow(a * dd - 1.0, 2) - 2.0 * std::cosh(a * u) -
           2.0 * (1.0 - a * dd) * std::cosh(a * (u - s)) +
           2.0 * std::sinh(a * u) * std::sinh(a * (u - s));
  }
};

/// Prefactor in front of the double integral in sigma = 1 units, per kernel
/// that appears in the integrand: two orderings at -1/4pi^2 each, or for
/// the anti-parallel pair a single symmetric kernel at -1/2pi^2.
inline double x_prefactor(Scenario s) {
  return s == Scenario::AntiParallel ? -1.0 / (2.0 * kPi * kPi) : -1.0 / (4.0 * kPi * kPi);
}

namespace detail {

inline Complex switching_phase(double u, double s, double omega) {
  return std::exp(Complex(-u * u + u * s - 0.5 * s * s, -omega * (2.0 * u - s)));
}

inline quad::Region2D swapped_half_region(double T) {
  quad::Region2D r;
  r.u_lo = 0.0;
  r.u_hi = 2.0 * std::sqrt(T);
  r.s_range = [T](double s) {
    const double h = std::sqrt(std::max(0.0, T - 0.25 * s * s));
    return std::pair{0.5 * s - h, 0.5 * s + h};
  };
  return r;
}

// Singular points of the integrand along the inner variable, from sign
// changes of the interval kernels.
template <class K>
void kernel_roots(const K& kappa, double lo, double hi, std::vector<double>& out) {
  quad::locate_roots(kappa, lo, hi, 48, out);
}

}  // namespace detail

/// X for any scenario, from the interval kernels.
inline IntegralResult x_kernel_integral(const ScenarioConfig& cfg, const QuadratureSpec& spec,
                                        XOptions opt = {}) {
  cfg.validate();
  spec.validate();
  const PairKernel kernel{cfg.scenario, cfg.a, cfg.delta_d};
  const double image_shift = 4.0 * cfg.delta_z * cfg.delta_z;
  const bool anti = cfg.scenario == Scenario::AntiParallel;
  bool use_ab = opt.ordering != Ordering::BA;
  bool use_ba = opt.ordering != Ordering::AB;
  double weight = 1.0;
  if (anti) {
    // one symmetric kernel; each ordering contributes half of it
    use_ab = true;
    use_ba = false;
    weight = opt.ordering == Ordering::Both ? 1.0 : 0.5;
  }
  const double pref = weight * x_prefactor(cfg.scenario);
  const double omega = cfg.omega;
  // k dips to about dd^2 along the singular curves; eps is measured in that
  // unit for close pairs so the eps -> 0 extrapolation stays polynomial.
  const double eps_unit = std::min(1.0, cfg.delta_d * cfg.delta_d);

  auto bracket = [&](double k, double eps) {
    eps *= eps_unit;
    Complex v = 1.0 / Complex(k, -eps);
    if (opt.include_image) v -= 1.0 / Complex(k + image_shift, -eps);
    return v;
  };
  auto integrand = [&](double u, double s, double eps) {
    Complex sum = 0.0;
    if (use_ab) sum += bracket(kernel(true, u, s), eps);
    if (use_ba) sum += bracket(kernel(false, u, s), eps);
    return pref * detail::switching_phase(u, s, omega) * sum;
  };

  const double T = spec.truncation_exponent;
  auto add_roots = [&](auto&& kappa_of, double lo, double hi, std::vector<double>& out) {
    for (int ord = 0; ord < 2; ++ord) {
      if ((ord == 0 && !use_ab) || (ord == 1 && !use_ba)) continue;
      const bool ab = ord == 0;
      detail::kernel_roots([&](double x) { return kappa_of(ab, x); }, lo, hi, out);
      if (opt.include_image) {
        detail::kernel_roots([&](double x) { return kappa_of(ab, x) + image_shift; }, lo, hi,
                             out);
      }
    }
  };

  if (!opt.swap_order) {
    quad::Region2D region = quad::gaussian_window_region(T, true);
    if (cfg.scenario == Scenario::Inertial) {
      const double dd = cfg.delta_d;
      const double r = std::sqrt(dd * dd + image_shift);
      const bool image = opt.include_image;
      region.s_breakpoints = [dd, r, image](double, std::vector<double>& out) {
        out.push_back(dd);
        if (image) out.push_back(r);
      };
    } else {
      auto ranges = region.s_range;
      region.s_breakpoints = [&, ranges](double u, std::vector<double>& out) {
        const auto [lo, hi] = ranges(u);
        add_roots([&](bool ab, double s) { return kernel(ab, u, s); }, lo, hi, out);
      };
    }
    return quad::integrate_2d_regularized(integrand, region, spec);
  }

  quad::Region2D region = detail::swapped_half_region(T);
  auto ranges = region.s_range;
  region.s_breakpoints = [&, ranges](double s, std::vector<double>& out) {
    if (cfg.scenario == Scenario::Inertial) return;
    const auto [lo, hi] = ranges(s);
    add_roots([&](bool ab, double u) { return kernel(ab, u, s); }, lo, hi, out);
  };
  auto swapped = [&](double s, double u, double eps) { return integrand(u, s, eps); };
  if (cfg.scenario == Scenario::Inertial) {
    // k does not depend on u, so the singular s values are fixed outer cuts
    const double dd = cfg.delta_d;
    const double r = std::sqrt(dd * dd + image_shift);
    std::vector<double> outer_cuts{dd};
    if (opt.include_image) outer_cuts.push_back(r);
    return quad::extrapolate_epsilon(
        [&](double eps) {
          return quad::integrate_2d_fixed(swapped, region, eps, spec, outer_cuts);
        },
        spec);
  }
  // singular curves cross the outer variable obliquely; the outer rule sees
  // the inner integral, which is smooth in s once eps resolves the peaks
  return quad::integrate_2d_regularized(swapped, region, spec);
}

/// Closed-form X of two detectors at rest, separated by dd, both at height dz:
///   X0 = (i e^{-W^2}/(4 sqrt(pi))) [w(-R/2)/R - w(-dd/2)/dd],  R = sqrt(dd^2 + 4 dz^2)
/// which is the Erfc form with e^{-dd^2/4} Erfc(i dd/2) = w(-dd/2).
inline Complex x_inertial(double omega, double delta_d, double delta_z) {
  if (!(delta_d > 0.0)) throw InputError("x_inertial: delta_d must be > 0");
  if (!(delta_z > 0.0)) throw OnBoundaryError("x_inertial: delta_z must be > 0");
  const double r = std::sqrt(delta_d * delta_d + 4.0 * delta_z * delta_z);
  const Complex bracket = specfun::faddeeva_w(-0.5 * r) / r -
                          specfun::faddeeva_w(-0.5 * delta_d) / delta_d;
  return Complex(0.0, std::exp(-omega * omega) / (4.0 * std::sqrt(kPi))) * bracket;
}

/// Free-space (no plate) closed-form X of two detectors at rest.
inline Complex x_inertial_free(double omega, double delta_d) {
  return Complex(0.0, -std::exp(-omega * omega) / (4.0 * std::sqrt(kPi))) *
         specfun::faddeeva_w(-0.5 * delta_d) / delta_d;
}

inline IntegralResult x_parallel(const ScenarioConfig& cfg, const QuadratureSpec& spec,
                                 XOptions opt = {}) {
  if (cfg.scenario != Scenario::Parallel) throw InputError("x_parallel: scenario must be parallel");
  return x_kernel_integral(cfg, spec, opt);
}

inline IntegralResult x_antiparallel(const ScenarioConfig& cfg, const QuadratureSpec& spec,
                                     XOptions opt = {}) {
  if (cfg.scenario != Scenario::AntiParallel) {
    throw InputError("x_antiparallel: scenario must be antiparallel");
  }
  return x_kernel_integral(cfg, spec, opt);
}

inline IntegralResult x_perpendicular(const ScenarioConfig& cfg, const QuadratureSpec& spec,
                                      XOptions opt = {}) {
  if (cfg.scenario != Scenario::Perpendicular) {
    throw InputError("x_perpendicular: scenario must be perpendicular");
  }
  return x_kernel_integral(cfg, spec, opt);
}

/// X straight from the Wightman function on two worldlines:
///   X = -int int chi chi e^{-i W (tau + tau')} W(earlier event, later event)
/// with the field module's (dt - i eps) prescription. Only the time ordering
/// of the two events is used, so it applies to any pair with a common t(tau).
inline IntegralResult x_from_trajectories(const Trajectory& ta, const Trajectory& tb,
                                          double omega, const QuadratureSpec& spec,
                                          bool include_image = true) {
  spec.validate();
  auto w = [&](const field::Event& early, const field::Event& late, double eps) {
    Complex v = field::wightman_free(early, late, eps);
    if (include_image) v -= field::wightman_image(early, late, eps);
    return v;
  };
  auto integrand = [&](double u, double s, double eps) {
    const field::Event a_late = ta.event_at(u), b_early = tb.event_at(u - s);
    const field::Event b_late = tb.event_at(u), a_early = ta.event_at(u - s);
    const Complex sum = w(b_early, a_late, eps) + w(a_early, b_late, eps);
    return -detail::switching_phase(u, s, omega) * sum;
  };
  quad::Region2D region = quad::gaussian_window_region(spec.truncation_exponent, true);
  auto ranges = region.s_range;
  region.s_breakpoints = [&, ranges](double u, std::vector<double>& out) {
    const auto [lo, hi] = ranges(u);
    for (int mirror = 0; mirror < 2; ++mirror) {
      if (mirror && !include_image) continue;
      auto k1 = [&](double s) {
        return -field::regularized_interval(tb.event_at(u - s), ta.event_at(u), 0.0, mirror)
                    .real();
      };
      auto k2 = [&](double s) {
        return -field::regularized_interval(ta.event_at(u - s), tb.event_at(u), 0.0, mirror)
                    .real();
      };
      quad::locate_roots(k1, lo, hi, 48, out);
      quad::locate_roots(k2, lo, hi, 48, out);
    }
  };
  return quad::integrate_2d_regularized(integrand, region, spec);
}

/// C = int int chi(tau) chi(tau') e^{-i W (tau - tau')} W(x_A(tau), x_B(tau'))
/// over both time orderings, as u = tau, s = tau - tau' on the full plane.
inline IntegralResult c_correlator(const Trajectory& ta, const Trajectory& tb, double omega,
                                   const QuadratureSpec& spec, bool swap_order = false,
                                   bool include_image = true) {
  spec.validate();
  auto integrand = [&](double u, double s, double eps) {
    const field::Event xa = ta.event_at(u);
    const field::Event xb = tb.event_at(u - s);
    Complex w = field::wightman_free(xa, xb, eps);
    if (include_image) w -= field::wightman_image(xa, xb, eps);
    return std::exp(Complex(-u * u + u * s - 0.5 * s * s, -omega * s)) * w;
  };
  const double T = spec.truncation_exponent;
  auto roots_along = [&](auto&& event_pair, double lo, double hi, std::vector<double>& out) {
    for (int mirror = 0; mirror < 2; ++mirror) {
      if (mirror && !include_image) continue;
      auto k = [&](double x) {
        const auto [e1, e2] = event_pair(x);
        return field::regularized_interval(e1, e2, 0.0, mirror).real();
      };
      quad::locate_roots(k, lo, hi, 64, out);
    }
  };
  if (!swap_order) {
    quad::Region2D region = quad::gaussian_window_region(T, false);
    auto ranges = region.s_range;
    region.s_breakpoints = [&, ranges](double u, std::vector<double>& out) {
      const auto [lo, hi] = ranges(u);
      if (lo < 0.0 && hi > 0.0) out.push_back(0.0);
      roots_along([&](double s) { return std::pair{ta.event_at(u), tb.event_at(u - s)}; }, lo,
                  hi, out);
    };
    return quad::integrate_2d_regularized(integrand, region, spec);
  }
  // outer s, inner u over (u - s/2)^2 + s^2/4 <= T
  quad::Region2D region;
  region.u_lo = -2.0 * std::sqrt(T);
  region.u_hi = 2.0 * std::sqrt(T);
  region.s_range = [T](double s) {
    const double h = std::sqrt(std::max(0.0, T - 0.25 * s * s));
    return std::pair{0.5 * s - h, 0.5 * s + h};
  };
  auto ranges = region.s_range;
  region.s_breakpoints = [&, ranges](double s, std::vector<double>& out) {
    const auto [lo, hi] = ranges(s);
    roots_along([&](double u) { return std::pair{ta.event_at(u), tb.event_at(u - s)}; }, lo, hi,
                out);
  };
  auto swapped = [&](double s, double u, double eps) { return integrand(u, s, eps); };
  const std::vector<double> outer_cuts{0.0};
  return quad::extrapolate_epsilon(
      [&](double eps) { return quad::integrate_2d_fixed(swapped, region, eps, spec, outer_cuts); },
      spec);
}

inline IntegralResult c_correlator(const ScenarioConfig& cfg, const QuadratureSpec& spec) {
  cfg.validate();
  return c_correlator(cfg.trajectory_a(), cfg.trajectory_b(), cfg.omega, spec);
}

/// The X operation matching the scenario.
inline IntegralResult x_correlator(const ScenarioConfig& cfg, const QuadratureSpec& spec) {
  cfg.validate();
  if (cfg.scenario == Scenario::Inertial) {
    IntegralResult r;
    r.value = x_inertial(cfg.omega, cfg.delta_d, cfg.delta_z);
    return r;
  }
  return x_kernel_integral(cfg, spec);
}

/// P of either detector in the scenario.
inline IntegralResult pd_correlator(const ScenarioConfig& cfg, const QuadratureSpec& spec) {
  cfg.validate();
  if (cfg.scenario == Scenario::Inertial) {
    IntegralResult r;
    r.value = pd_inertial(cfg.omega, cfg.delta_z);
    return r;
  }
  return pd_accelerated(cfg.omega, cfg.a, cfg.delta_z, spec);
}

}  // namespace udw::detector
