#ifndef ZERMELO_WINDFIELD_HPP
#define ZERMELO_WINDFIELD_HPP

#include <array>
#include <vector>

#include "zermelo/common.hpp"

namespace zermelo {

/// A single compactly supported vortex. The induced velocity is purely
/// tangential, vanishes identically outside the support disk, and the radial
/// speed profile is a polynomial that is three times continuously
/// differentiable on all of R^2:
///
///   speed(r) = strength * kPeakGain * u * (1 - u^2)^4,   u = r / radius <= 1
///
/// kPeakGain = 19683/4096 normalizes the profile so the peak tangential
/// speed equals |strength|, attained at r = radius/3. Positive strength spins
/// counterclockwise.
struct Vortex {
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
  double strength = 0.0;

  static constexpr double kPeakGain = 19683.0 / 4096.0;
  static constexpr double kPeakRadiusFraction = 1.0 / 3.0;
};

/// Second derivatives of a velocity field: tensor[i](j, k) = d2 w_i / dx_j dx_k.
using WindHessian = std::array<Mat2, 2>;

/// Superposition of disjoint vortices. Immutable after construction; all
/// evaluations are pure and thread-safe.
class WindField {
public:
  WindField() = default;

  /// Throws std::invalid_argument on nonpositive radius or overlapping
  /// supports (center distance < sum of radii).
  explicit WindField(std::vector<Vortex> vortices);

  const std::vector<Vortex>& vortices() const { return vortices_; }

  /// Largest speed the field attains anywhere (= max |strength|).
  double max_speed() const;

  Vec2 velocity(const Vec2& x) const;

  /// jacobian(x)(i, j) = d w_i / dx_j.
  Mat2 jacobian(const Vec2& x) const;

  WindHessian second_derivatives(const Vec2& x) const;

private:
  std::vector<Vortex> vortices_;
};

/// The 15-vortex benchmark: a 5x3 grid of disjoint vortices with alternating
/// spin covering roughly [0,1] x [-0.3,0.3], peak speed = airspeed/2.
WindField benchmark_field(double airspeed = 1.0);

} // namespace zermelo

#endif
