#ifndef ZERMELO_TIMEFUNCTIONAL_HPP
#define ZERMELO_TIMEFUNCTIONAL_HPP

#include <Eigen/Core>
#include <Eigen/Dense>
#include <vector>

#include "zermelo/trajectory.hpp"
#include "zermelo/windfield.hpp"

namespace zermelo {

/// How second derivatives of the travel time are computed.
enum class HessianMode {
  Analytic,           ///< exact chain-rule Hessian (default)
  FiniteDifference,   ///< central differences of the analytic gradient
};

/// Fixed data of one navigation problem: the wind, the endpoints, the
/// airspeed, and the grid resolution.
struct ProblemSpec {
  WindField wind;
  Vec2 origin{0.0, 0.0};
  Vec2 destination{1.0, 0.0};
  double airspeed = 1.0;
  int n = 512;

  /// Throws invalid_config_error unless n >= 2 and airspeed exceeds the
  /// field's peak speed (the time integrand is undefined otherwise).
  void validate() const;
};

/// Pointwise travel-time integrand f(x, v): time per unit parameter for a
/// craft at position x moving with parameter velocity v through wind w(x)
/// at the given airspeed.  Derivative storage is ordered (x, v) as one
/// 4-vector.
struct IntegrandValue {
  double f = 0.0;
  Eigen::Vector4d grad = Eigen::Vector4d::Zero();
  Eigen::Matrix4d hess = Eigen::Matrix4d::Zero();
};

/// Evaluate f alone (no derivatives).
double integrand(const WindField& wind, double airspeed, const Vec2& x, const Vec2& v);

/// Evaluate f with its exact gradient and Hessian in (x, v).
IntegrandValue integrand_derivatives(const WindField& wind, double airspeed,
                                     const Vec2& x, const Vec2& v);

/// Midpoint-rule travel time of the polyline.
double travel_time(const ProblemSpec& spec, const Trajectory& t);

/// Travel time with derivatives in the interior nodes x_1..x_{n-1}
/// (endpoints are fixed data).  The Hessian is block tridiagonal; it is
/// stored as dense 2x2 blocks: diag[i] couples node i+1 with itself and
/// offdiag[i] couples node i+1 with node i+2.
struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;        // size 2(n-1)
  std::vector<Mat2> diag;          // n-1 blocks
  std::vector<Mat2> offdiag;       // n-2 blocks
};

Evaluation evaluate_with_derivatives(const ProblemSpec& spec, const Trajectory& t,
                                     HessianMode mode = HessianMode::Analytic);

} // namespace zermelo

#endif
