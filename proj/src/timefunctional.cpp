#include "zermelo/timefunctional.hpp"

#include <cmath>

namespace zermelo {

void ProblemSpec::validate() const {
  if (n < 2) throw invalid_config_error("grid must have at least 2 intervals");
  if (!(airspeed > 0.0)) throw invalid_config_error("airspeed must be positive");
  if (!(airspeed > wind.max_speed()))
    throw invalid_config_error("airspeed must exceed the field's peak wind speed");
}

namespace {

// The integrand solves f |v/f - w| = |v| scaled to airspeed vbar: the craft
// covers parameter velocity v in time f while its ground speed relative to
// the wind is vbar.  Writing p = v.w, q = vbar^2 - w.w, n2 = v.v gives the
// closed form f = (s - p)/q with s = sqrt(p^2 + q n2); q > 0 is required.
struct Core {
  double p, q, n2, s, f;
  Vec2 w;
  Mat2 A; // wind jacobian
};

Core core(const WindField& wind, double airspeed, const Vec2& x, const Vec2& v,
          bool need_jacobian) {
  Core c;
  c.w = wind.velocity(x);
  c.p = v.dot(c.w);
  c.q = airspeed * airspeed - c.w.squaredNorm();
  if (!(c.q > 0.0))
    throw wind_exceeds_airspeed_error("wind speed reaches the airspeed");
  c.n2 = v.squaredNorm();
  c.s = std::sqrt(c.p * c.p + c.q * c.n2);
  c.f = (c.s - c.p) / c.q;
  if (need_jacobian) c.A = wind.jacobian(x);
  return c;
}

} // namespace

double integrand(const WindField& wind, double airspeed, const Vec2& x, const Vec2& v) {
  return core(wind, airspeed, x, v, false).f;
}

IntegrandValue integrand_derivatives(const WindField& wind, double airspeed,
                                     const Vec2& x, const Vec2& v) {
  const Core c = core(wind, airspeed, x, v, true);
  if (!(c.s > 0.0))
    throw degenerate_geometry_error("integrand derivatives need a nonzero velocity");
  const double p = c.p, q = c.q, n2 = c.n2, s = c.s;

  // Partials of f(p, q, n2).
  const double Fp = (p / s - 1.0) / q;
  const double Fq = n2 / (2.0 * s * q) - (s - p) / (q * q);
  const double Fn = 1.0 / (2.0 * s);
  const double s3 = s * s * s;
  const double Fpp = n2 / s3;
  const double Fpq = -p * n2 / (2.0 * q * s3) - (p / s - 1.0) / (q * q);
  const double Fpn = -p / (2.0 * s3);
  const double Fqq = -n2 * n2 / (4.0 * s3 * q) - n2 / (s * q * q) + 2.0 * (s - p) / (q * q * q);
  const double Fqn = -n2 / (4.0 * s3);
  const double Fnn = -q / (4.0 * s3);

  // Gradients of the intermediates in (x, v), stacked as 4-vectors.
  Eigen::Vector4d gp, gq, gn;
  gp << c.A.transpose() * v, c.w;
  gq << -2.0 * c.A.transpose() * c.w, Vec2::Zero();
  gn << Vec2::Zero(), 2.0 * v;

  IntegrandValue out;
  out.f = c.f;
  out.grad = Fp * gp + Fq * gq + Fn * gn;

  out.hess = Fpp * gp * gp.transpose() + Fqq * gq * gq.transpose() +
             Fnn * gn * gn.transpose() +
             Fpq * (gp * gq.transpose() + gq * gp.transpose()) +
             Fpn * (gp * gn.transpose() + gn * gp.transpose()) +
             Fqn * (gq * gn.transpose() + gn * gq.transpose());

  // Curvature of the intermediates themselves.
  const WindHessian S = wind.second_derivatives(x);
  const Mat2 p_xx = v.x() * S[0] + v.y() * S[1];
  const Mat2 q_xx = -2.0 * (c.A.transpose() * c.A + c.w.x() * S[0] + c.w.y() * S[1]);
  out.hess.topLeftCorner<2, 2>() += Fp * p_xx + Fq * q_xx;
  out.hess.topRightCorner<2, 2>() += Fp * c.A.transpose();
  out.hess.bottomLeftCorner<2, 2>() += Fp * c.A;
  out.hess.bottomRightCorner<2, 2>() += Fn * 2.0 * Mat2::Identity();
  return out;
}

double travel_time(const ProblemSpec& spec, const Trajectory& t) {
  if (t.intervals() != spec.n)
    throw grid_mismatch_error("travel_time: trajectory grid does not match the problem");
  const int n = spec.n;
  const double h = 1.0 / n;
  double T = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 mid = 0.5 * (t.nodes[i] + t.nodes[i + 1]);
    T += integrand(spec.wind, spec.airspeed, mid, t.velocity(i)) * h;
  }
  return T;
}

namespace {

// Central difference of the analytic gradient, coordinate by coordinate in
// the 4 arguments (x, v); keeps the cost per interval constant.
Eigen::Matrix4d fd_hessian(const WindField& wind, double airspeed, const Vec2& x,
                           const Vec2& v) {
  Eigen::Matrix4d H;
  Eigen::Vector4d z;
  z << x, v;
  for (int j = 0; j < 4; ++j) {
    const double eps = 1e-6 * (1.0 + std::abs(z(j)));
    Eigen::Vector4d zp = z, zm = z;
    zp(j) += eps;
    zm(j) -= eps;
    const IntegrandValue up =
        integrand_derivatives(wind, airspeed, zp.head<2>(), zp.tail<2>());
    const IntegrandValue um =
        integrand_derivatives(wind, airspeed, zm.head<2>(), zm.tail<2>());
    H.col(j) = (up.grad - um.grad) / (2.0 * eps);
  }
  return 0.5 * (H + H.transpose());
}

} // namespace

Evaluation evaluate_with_derivatives(const ProblemSpec& spec, const Trajectory& t,
                                     HessianMode mode) {
  if (t.intervals() != spec.n)
    throw grid_mismatch_error("evaluate_with_derivatives: trajectory grid does not match");
  const int n = spec.n;
  const double h = 1.0 / n;
  const double N = static_cast<double>(n);

  Evaluation ev;
  ev.gradient = Eigen::VectorXd::Zero(2 * (n - 1));
  ev.diag.assign(n - 1, Mat2::Zero());
  ev.offdiag.assign(n > 1 ? n - 2 : 0, Mat2::Zero());

  for (int i = 0; i < n; ++i) {
    const Vec2 mid = 0.5 * (t.nodes[i] + t.nodes[i + 1]);
    const Vec2 vel = t.velocity(i);
    IntegrandValue u = integrand_derivatives(spec.wind, spec.airspeed, mid, vel);
    if (mode == HessianMode::FiniteDifference)
      u.hess = fd_hessian(spec.wind, spec.airspeed, mid, vel);
    ev.value += u.f * h;

    const Vec2 gx = u.grad.head<2>();
    const Vec2 gv = u.grad.tail<2>();
    // d(h f)/dx_i = (h/2) gx - gv,  d(h f)/dx_{i+1} = (h/2) gx + gv,
    // using h N = 1.
    if (i >= 1) ev.gradient.segment<2>(2 * (i - 1)) += 0.5 * h * gx - gv;
    if (i + 1 <= n - 1) ev.gradient.segment<2>(2 * i) += 0.5 * h * gx + gv;

    const Mat2 Hxx = u.hess.topLeftCorner<2, 2>();
    const Mat2 Hxv = u.hess.topRightCorner<2, 2>();
    const Mat2 Hvv = u.hess.bottomRightCorner<2, 2>();
    const Mat2 both = 0.25 * h * Hxx;
    if (i >= 1)
      ev.diag[i - 1] += both - 0.5 * Hxv - 0.5 * Hxv.transpose() + N * Hvv;
    if (i + 1 <= n - 1)
      ev.diag[i] += both + 0.5 * Hxv + 0.5 * Hxv.transpose() + N * Hvv;
    if (i >= 1 && i + 1 <= n - 1)
      ev.offdiag[i - 1] += both + 0.5 * Hxv - 0.5 * Hxv.transpose() - N * Hvv;
  }
  return ev;
}

} // namespace zermelo
