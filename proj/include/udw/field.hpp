#pragma once

// Worldlines and the massless scalar Wightman function in front of a
// Dirichlet plane at z = 0. Units: sigma = 1, coupling lambda = 1.

#include <cmath>
#include <numbers>
#include <string>

#include "udw/errors.hpp"
#include "udw/specfun.hpp"

namespace udw::field {

struct Event {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class TrajectoryKind {
  RestA,
  RestB,
  ParallelA,
  ParallelB,
  AntiParallelA,
  AntiParallelB,
  PerpA,
  PerpB,
};

inline bool is_rest(TrajectoryKind k) {
  return k == TrajectoryKind::RestA || k == TrajectoryKind::RestB;
}

inline const char* to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::RestA: return "RestA";
    case TrajectoryKind::RestB: return "RestB";
    case TrajectoryKind::ParallelA: return "ParallelA";
    case TrajectoryKind::ParallelB: return "ParallelB";
    case TrajectoryKind::AntiParallelA: return "AntiParallelA";
    case TrajectoryKind::AntiParallelB: return "AntiParallelB";
    case TrajectoryKind::PerpA: return "PerpA";
    case TrajectoryKind::PerpB: return "PerpB";
  }
  return "?";
}

/// x_D(tau) for one detector. Every worldline sits at height delta_z above
/// the plate and B is displaced from A by delta_d along x. PerpA accelerates
/// along y, every other accelerated kind along x.
class Trajectory {
 public:
  Trajectory(TrajectoryKind kind, double a, double delta_d, double delta_z)
      : kind_(kind), a_(a), delta_d_(delta_d), delta_z_(delta_z) {
    if (!std::isfinite(a) || !std::isfinite(delta_d) || !std::isfinite(delta_z)) {
      throw InputError("Trajectory: parameters must be finite");
    }
    if (!(delta_z > 0.0)) {
      throw OnBoundaryError("Trajectory: delta_z must be > 0 (detector on the boundary)");
    }
    if (delta_d < 0.0) throw InputError("Trajectory: delta_d must be >= 0");
    if (is_rest(kind)) {
      if (a != 0.0) throw InputError("Trajectory: rest worldlines take a = 0");
    } else if (!(a > 0.0)) {
      throw InputError(std::string("Trajectory: ") + to_string(kind) + " needs a > 0");
    }
  }

  TrajectoryKind kind() const { return kind_; }
  double a() const { return a_; }
  double delta_d() const { return delta_d_; }
  double delta_z() const { return delta_z_; }

  Event event_at(double tau) const {
    const double z = delta_z_;
    if (is_rest(kind_)) {
      const double x = kind_ == TrajectoryKind::RestB ? delta_d_ : 0.0;
      return {tau, x, 0.0, z};
    }
    const double inv = 1.0 / a_;
    const double sh = inv * std::sinh(a_ * tau);
    const double ch = inv * std::cosh(a_ * tau);
    // a^-1 (cosh a tau - 1), without cancellation near tau = 0
    const double bump = 2.0 * inv * std::pow(std::sinh(0.5 * a_ * tau), 2);
    switch (kind_) {
      case TrajectoryKind::ParallelA: return {sh, ch, 0.0, z};
      case TrajectoryKind::ParallelB: return {sh, ch + delta_d_, 0.0, z};
      case TrajectoryKind::AntiParallelA: return {sh, bump, 0.0, z};
      case TrajectoryKind::AntiParallelB: return {sh, -bump - delta_d_, 0.0, z};
      case TrajectoryKind::PerpA: return {sh, 0.0, bump, z};
      case TrajectoryKind::PerpB: return {sh, bump + delta_d_, 0.0, z};
      default: break;
    }
    return {};
  }

 private:
  TrajectoryKind kind_;
  double a_;
  double delta_d_;
  double delta_z_;
};

/// (dt - i eps)^2 - |dx|^2 for the free pair (mirror = false) or for x1 and
/// the mirror image of x2 (z' -> -z').
inline Complex regularized_interval(const Event& x1, const Event& x2, double eps, bool mirror) {
  const double dt = x1.t - x2.t;
  const double dx = x1.x - x2.x;
  const double dy = x1.y - x2.y;
  const double dz = mirror ? x1.z + x2.z : x1.z - x2.z;
  const Complex t(dt, -eps);
  return t * t - (dx * dx + dy * dy + dz * dz);
}

inline Complex wightman_free(const Event& x1, const Event& x2, double eps) {
  return -1.0 / (4.0 * std::numbers::pi * std::numbers::pi) /
         regularized_interval(x1, x2, eps, false);
}

inline Complex wightman_image(const Event& x1, const Event& x2, double eps) {
  return -1.0 / (4.0 * std::numbers::pi * std::numbers::pi) /
         regularized_interval(x1, x2, eps, true);
}

/// Vacuum Wightman function with the Dirichlet plate at z = 0:
/// W = W_free(x1, x2) - W_free(x1, mirror x2), with dt -> dt - i eps.
inline Complex wightman_boundary(const Event& x1, const Event& x2, double eps) {
  if (!(eps > 0.0)) throw InputError("wightman_boundary: eps must be > 0");
  return wightman_free(x1, x2, eps) - wightman_image(x1, x2, eps);
}

}  // namespace udw::field
