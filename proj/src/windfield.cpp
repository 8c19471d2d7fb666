#include "zermelo/windfield.hpp"

#include <cmath>
#include <stdexcept>

namespace zermelo {

namespace {

// Quarter-turn rotation, perp(d) = (-d.y, d.x).
inline Vec2 perp(const Vec2& d) { return Vec2(-d.y(), d.x()); }

// Inside the support the velocity is w(x) = phi(rho) * perp(d) with
// d = x - center and rho = |d|^2,
//
//   phi(rho) = (strength * kPeakGain / R) * (1 - rho/R^2)^4,
//
// a polynomial in the coordinates. phi and its first three derivatives in
// rho vanish at rho = R^2, which makes the field C^3 across the boundary.
struct Profile {
  double phi;   // phi(rho)
  double dphi;  // phi'(rho)
  double ddphi; // phi''(rho)
};

inline Profile profile(const Vortex& v, double rho) {
  const double r2 = v.radius * v.radius;
  const double t = 1.0 - rho / r2;
  const double c = v.strength * Vortex::kPeakGain / v.radius;
  Profile p;
  p.phi = c * t * t * t * t;
  p.dphi = -4.0 * c * t * t * t / r2;
  p.ddphi = 12.0 * c * t * t / (r2 * r2);
  return p;
}

} // namespace

WindField::WindField(std::vector<Vortex> vortices) : vortices_(std::move(vortices)) {
  for (const Vortex& v : vortices_) {
    if (!(v.radius > 0.0))
      throw std::invalid_argument("vortex radius must be positive");
  }
  for (std::size_t i = 0; i < vortices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vortices_.size(); ++j) {
      const double dist = (vortices_[i].center - vortices_[j].center).norm();
      if (dist < vortices_[i].radius + vortices_[j].radius)
        throw std::invalid_argument("vortex supports overlap");
    }
  }
}

double WindField::max_speed() const {
  double m = 0.0;
  for (const Vortex& v : vortices_) m = std::max(m, std::abs(v.strength));
  return m;
}

Vec2 WindField::velocity(const Vec2& x) const {
  Vec2 w = Vec2::Zero();
  for (const Vortex& v : vortices_) {
    const Vec2 d = x - v.center;
    const double rho = d.squaredNorm();
    if (rho >= v.radius * v.radius) continue;
    w += profile(v, rho).phi * perp(d);
  }
  return w;
}

Mat2 WindField::jacobian(const Vec2& x) const {
  Mat2 jac = Mat2::Zero();
  for (const Vortex& v : vortices_) {
    const Vec2 d = x - v.center;
    const double rho = d.squaredNorm();
    if (rho >= v.radius * v.radius) continue;
    const Profile p = profile(v, rho);
    const Vec2 t = perp(d);
    // dw_i/dx_j = 2 phi' t_i d_j + phi P_ij.  The outer product is formed
    // before scaling so the exact cancellation in its trace (t is
    // perpendicular to d) survives in floating point.
    const Mat2 outer = t * d.transpose();
    jac += (2.0 * p.dphi) * outer;
    jac(0, 1) += -p.phi;
    jac(1, 0) += p.phi;
  }
  return jac;
}

WindHessian WindField::second_derivatives(const Vec2& x) const {
  WindHessian hess{Mat2::Zero(), Mat2::Zero()};
  for (const Vortex& v : vortices_) {
    const Vec2 d = x - v.center;
    const double rho = d.squaredNorm();
    if (rho >= v.radius * v.radius) continue;
    const Profile p = profile(v, rho);
    const Vec2 t = perp(d);
    // Row i of the quarter-turn rotation as a vector.
    const Vec2 prow[2] = {Vec2(0.0, -1.0), Vec2(1.0, 0.0)};
    // Outer products are materialized before scaling so the matrices stay
    // exactly symmetric in floating point.
    const Mat2 dd = d * d.transpose();
    for (int i = 0; i < 2; ++i) {
      const Mat2 cross = d * prow[i].transpose() + prow[i] * d.transpose();
      Mat2 h = (4.0 * p.ddphi * t(i)) * dd;
      h += (2.0 * p.dphi * t(i)) * Mat2::Identity();
      h += (2.0 * p.dphi) * cross;
      hess[i] += h;
    }
  }
  return hess;
}

WindField benchmark_field(double airspeed) {
  // 5 columns x 3 rows, spacing 0.2, radius 0.095 (disjoint with margin),
  // peak speed airspeed/2, spin alternating in a checkerboard.
  std::vector<Vortex> vs;
  vs.reserve(15);
  for (int col = 0; col < 5; ++col) {
    for (int row = 0; row < 3; ++row) {
      Vortex v;
      v.center = Vec2(0.1 + 0.2 * col, 0.2 * (row - 1));
      v.radius = 0.095;
      const int sign = ((col + row) % 2 == 0) ? 1 : -1;
      v.strength = sign * 0.5 * airspeed;
      vs.push_back(v);
    }
  }
  return WindField(std::move(vs));
}

} // namespace zermelo
