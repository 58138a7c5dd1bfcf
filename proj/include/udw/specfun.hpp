#pragma once

// Complex error function and its scaled relative, the Faddeeva function
//
//   w(z) = exp(-z^2) erfc(-i z).
//
// Everything the detector closed forms need is expressed through w, which
// stays O(1/|z|) in the upper half plane where Erf itself overflows.
//
// Regions (z = x + i y, folded into the first quadrant by symmetry):
//   * |x| <= kStrip            Maclaurin series of erf; cancellation <= exp(2 x^2)
//   * |y| <= kStrip, |z| < R   Kummer form 2z/sqrt(pi) e^{-z^2} M(1, 3/2, z^2);
//                              cancellation <= exp(2 y^2)
//   * otherwise                Laplace continued fraction for erfc, Re z > 0

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "udw/errors.hpp"

namespace udw {

using Complex = std::complex<double>;

namespace specfun {
namespace detail {

inline constexpr double kStrip = 1.25;
inline constexpr double kSeriesRadius = 6.0;
inline constexpr int kMaxContinuedFractionTerms = 300;
// exp() overflows past ~709.78; keep head room for the series prefactors.
inline constexpr double kExpLimit = 700.0;

inline constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

inline void require_finite(Complex z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InputError(std::string(who) + ": argument must be finite");
  }
}

// erf(z) = 2/sqrt(pi) sum_n (-1)^n z^(2n+1) / (n! (2n+1))
inline Complex erf_maclaurin(Complex z) {
  const Complex z2 = z * z;
  const double peak = std::norm(z);
  Complex power = z;
  Complex sum = z;
  for (int n = 1; n < 5000; ++n) {
    power *= -z2 / static_cast<double>(n);
    const Complex add = power / static_cast<double>(2 * n + 1);
    sum += add;
    if (n > peak && std::abs(add) <= 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

// erf(z) = 2z/sqrt(pi) e^{-z^2} sum_n (2 z^2)^n / (2n+1)!!
inline Complex erf_kummer(Complex z) {
  const Complex two_z2 = 2.0 * z * z;
  const double peak = std::norm(z);
  Complex term = 1.0;
  Complex sum = 1.0;
  for (int n = 1; n < 5000; ++n) {
    term *= two_z2 / static_cast<double>(2 * n + 1);
    sum += term;
    if (n > peak && std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * z * std::exp(-z * z) * sum;
}

// sqrt(pi) e^{zeta^2} erfc(zeta) = 1/(zeta + (1/2)/(zeta + 1/(zeta + (3/2)/(zeta + ...))))
// via modified Lentz, Re zeta >= 0.
inline Complex erfc_continued_fraction(Complex zeta) {
  constexpr double tiny = 1e-300;
  Complex f = zeta;
  if (f == 0.0) f = tiny;
  Complex c = f;
  Complex d = 0.0;
  for (int n = 1; n <= kMaxContinuedFractionTerms; ++n) {
    const double a = 0.5 * n;
    d = zeta + a * d;
    if (d == 0.0) d = tiny;
    c = zeta + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

// erf on the closed first quadrant.
inline Complex erf_first_quadrant(double x, double y) {
  const Complex z(x, y);
  if (x <= kStrip) {
    if (x * x + y * y > kExpLimit) {
      throw RangeError("erf_complex: |Im z| too large, result overflows double range");
    }
    return erf_maclaurin(z);
  }
  if (y <= kStrip && std::abs(z) < kSeriesRadius) return erf_kummer(z);
  if (y * y - x * x > kExpLimit) {
    throw RangeError("erf_complex: |Im z| too large, result overflows double range");
  }
  const Complex scaled = erfc_continued_fraction(z) * std::numbers::inv_sqrtpi;
  return 1.0 - std::exp(-z * z) * scaled;
}

}  // namespace detail

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Relative accuracy is ~1e-14 in the closed upper half plane. In the lower
/// half plane the reflection w(z) = 2 exp(-z^2) - w(-z) is used, which throws
/// RangeError once exp(-z^2) leaves double range.
inline Complex faddeeva_w(Complex z) {
  detail::require_finite(z, "faddeeva_w");
  if (z.imag() < 0.0) {
    const Complex z2 = z * z;
    if (-z2.real() > detail::kExpLimit) {
      throw RangeError("faddeeva_w: exp(-z^2) overflows in the lower half plane");
    }
    return 2.0 * std::exp(-z2) - faddeeva_w(-z);
  }
  const Complex zeta(z.imag(), -z.real());  // -i z, Re >= 0
  if (z.imag() > detail::kStrip || std::abs(z) >= detail::kSeriesRadius) {
    return detail::erfc_continued_fraction(zeta) * std::numbers::inv_sqrtpi;
  }
  return std::exp(-z * z) * (1.0 - detail::erf_maclaurin(zeta));
}

/// Error function of a complex argument.
///
/// Relative error <= 1e-12 for |z| <= 30 away from the complex zeros of erf.
/// Throws RangeError where |erf(z)| (or a series intermediate) overflows,
/// i.e. for |Im z| large compared with |Re z|.
inline Complex erf_complex(Complex z) {
  detail::require_finite(z, "erf_complex");
  if (z.imag() == 0.0) return {std::erf(z.real()), 0.0};
  const bool flip_re = z.real() < 0.0;
  const bool flip_im = z.imag() < 0.0;
  Complex r = detail::erf_first_quadrant(std::abs(z.real()), std::abs(z.imag()));
  // erf(conj z) = conj erf(z); erf(-z) = -erf(z)
  if (flip_re != flip_im) r = std::conj(r);
  if (flip_re) r = -r;
  return r;
}

/// Complementary error function on the real line, backed by std::erfc.
inline double erfc_real(double x) {
  if (!std::isfinite(x)) throw InputError("erfc_real: argument must be finite");
  return std::erfc(x);
}

}  // namespace specfun
}  // namespace udw
