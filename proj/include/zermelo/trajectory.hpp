#ifndef ZERMELO_TRAJECTORY_HPP
#define ZERMELO_TRAJECTORY_HPP

#include <iosfwd>
#include <vector>

#include "zermelo/common.hpp"

namespace zermelo {

/// Polyline ξ on the uniform parameter grid tau_i = i/n, i = 0..n.
/// Nodes include both endpoints, so nodes.size() == n + 1.
struct Trajectory {
  std::vector<Vec2> nodes;

  int intervals() const { return static_cast<int>(nodes.size()) - 1; }

  /// Difference quotient n * (x_{i+1} - x_i) on interval i.
  Vec2 velocity(int i) const {
    return static_cast<double>(intervals()) * (nodes[i + 1] - nodes[i]);
  }

  /// Sum of node chord lengths.
  double arc_length() const;
};

/// Straight chord from origin to destination sampled on n intervals.
Trajectory straight_line(const Vec2& origin, const Vec2& destination, int n);

/// Shape perturbation: normal displacement a * sin(k pi tau) applied along
/// the discrete unit normal of an anchor trajectory.  Endpoints are always
/// left exactly in place.
struct Deviation {
  double amplitude = 0.0;
  int frequency = 1;
};

/// Scaled Sobolev-type magnitude |a| * (1 + k pi) of a single deviation.
double sobolev_norm(const Deviation& dev);

/// Sum of the per-deviation magnitudes.
double sobolev_norm(const std::vector<Deviation>& devs);

/// Amplitude whose deviation has the given signed magnitude: a = s / (1 + k pi).
double amplitude_from_signed_norm(double signed_norm, int frequency);

/// Discrete unit normals of a trajectory: the tangent (central difference in
/// the interior, one-sided at the ends) rotated by +90 degrees and
/// normalized.  Throws degenerate_geometry_error on a zero-length interval
/// or a vanishing tangent.
std::vector<Vec2> unit_normals(const Trajectory& base);

/// Node-wise displacement a * n(tau_i) * sin(k pi tau_i) of one deviation
/// along the anchor's normals; exactly zero at both endpoints.
std::vector<Vec2> sample_deviation(const Trajectory& anchor, const Deviation& dev);

/// Anchor plus the sum of the given normal sine perturbations.  The
/// perturbations are accumulated first and added to the anchor once, so the
/// result is independent of the order of `devs`.
Trajectory apply_deviations(const Trajectory& anchor, const std::vector<Deviation>& devs);

/// Discrete W^{1,inf} distance: max node distance plus max difference-quotient
/// distance.  Throws grid_mismatch_error when the grids differ.
double w1inf_distance(const Trajectory& a, const Trajectory& b);

/// Piecewise-linear resample of `t` onto `n` intervals of equal parameter.
Trajectory resample(const Trajectory& t, int n);

/// CSV with header "tau,x,y"; doubles are written round-trip exact.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);
Trajectory read_trajectory_csv(std::istream& in);

} // namespace zermelo

#endif
