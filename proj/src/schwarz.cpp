#include "zermelo/schwarz.hpp"

#include <algorithm>
#include <cmath>

namespace zermelo {

namespace {

// Travel time contributed by intervals [first, last) of the full polyline,
// in the global parametrization.
double piece_time(const ProblemSpec& spec, const Trajectory& t, int first, int last) {
  const double h = 1.0 / spec.n;
  double T = 0.0;
  for (int i = first; i < last; ++i) {
    const Vec2 mid = 0.5 * (t.nodes[i] + t.nodes[i + 1]);
    T += integrand(spec.wind, spec.airspeed, mid, t.velocity(i)) * h;
  }
  return T;
}

} // namespace

SegmentPlan make_plan(const Trajectory& t, int segments, bool shifted) {
  if (segments < 1) throw std::invalid_argument("make_plan: need at least one segment");
  const int n = t.intervals();

  // Cumulative arc length at each node.
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 0; i < n; ++i)
    cum[i + 1] = cum[i] + (t.nodes[i + 1] - t.nodes[i]).norm();
  const double total = cum[n];
  if (!(total > 0.0)) throw degenerate_geometry_error("make_plan: zero arc length");

  // Cut fractions: equal pieces, or pieces moved half a width along so the
  // cuts interleave the unshifted ones (the first and last piece are halves).
  std::vector<double> fractions;
  fractions.push_back(0.0);
  if (shifted) {
    for (int i = 0; i < segments; ++i)
      fractions.push_back((i + 0.5) / segments);
  } else {
    for (int i = 1; i < segments; ++i)
      fractions.push_back(static_cast<double>(i) / segments);
  }
  fractions.push_back(1.0);

  // Snap each cut to the grid node nearest in arc length, ties toward the
  // lower index.
  std::vector<int> cuts;
  cuts.reserve(fractions.size());
  for (double frac : fractions) {
    const double target = frac * total;
    int best = 0;
    double best_err = std::abs(cum[0] - target);
    for (int j = 1; j <= n; ++j) {
      const double err = std::abs(cum[j] - target);
      if (err < best_err) {
        best = j;
        best_err = err;
      }
    }
    cuts.push_back(best);
  }

  SegmentPlan plan;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    Segment seg{cuts[k], cuts[k + 1]};
    // A shifted plan's first and last pieces are deliberate half-segments and
    // may be as short as 2 intervals; every full segment needs at least 4.
    const bool half_piece = shifted && (k == 0 || k + 2 == cuts.size());
    if (seg.intervals() < (half_piece ? 2 : 4))
      throw segment_too_short_error("make_plan: a segment received too few intervals");
    plan.push_back(seg);
  }
  return plan;
}

bool optimize_segment(const ProblemSpec& spec, Trajectory& t, const Segment& seg,
                      const SolverOptions& opts) {
  if (seg.first < 0 || seg.last > t.intervals() || seg.intervals() < 2)
    throw segment_too_short_error("optimize_segment: bad segment bounds");

  ProblemSpec sub;
  sub.wind = spec.wind;
  sub.airspeed = spec.airspeed;
  sub.origin = t.nodes[seg.first];
  sub.destination = t.nodes[seg.last];
  sub.n = seg.intervals();

  Trajectory piece;
  piece.nodes.assign(t.nodes.begin() + seg.first, t.nodes.begin() + seg.last + 1);

  KKTState state = initialize_state(piece);
  SolveReport rep;
  try {
    rep = newton_solve(sub, state, opts);
  } catch (const degenerate_geometry_error&) {
    return false;
  }
  if (rep.status != SolveStatus::Converged) return false;

  // Accept only improvements, measured in the global parametrization so a
  // sweep of accepted segments can never raise the total travel time.
  const double before = piece_time(spec, t, seg.first, seg.last);
  Trajectory candidate = t;
  for (int j = 1; j < seg.intervals(); ++j)
    candidate.nodes[seg.first + j] = state.trajectory.nodes[j];
  const double after = piece_time(spec, candidate, seg.first, seg.last);
  if (!(after <= before + 1e-12)) return false;

  t = std::move(candidate);
  return true;
}

SchwarzReport schwarz_smooth(const ProblemSpec& spec, Trajectory& t,
                             const SchwarzOptions& opts) {
  if (t.intervals() != spec.n)
    throw grid_mismatch_error("schwarz_smooth: trajectory grid does not match");
  SchwarzReport report;
  for (int pass = 0; pass < opts.passes; ++pass) {
    const bool shifted = (pass % 2 == 1);
    const SegmentPlan plan = make_plan(t, opts.segments, shifted);
    for (const Segment& seg : plan) {
      if (optimize_segment(spec, t, seg, opts.solver))
        ++report.segments_accepted;
      else
        ++report.segments_rejected;
    }
    report.pass_times.push_back(travel_time(spec, t));
  }
  return report;
}

SmoothedSolveReport smooth_then_solve(const ProblemSpec& spec, KKTState& state,
                                      const SchwarzOptions& opts) {
  SmoothedSolveReport out;
  out.smoothing = schwarz_smooth(spec, state.trajectory, opts);
  state = initialize_state(state.trajectory);
  out.solve = newton_solve(spec, state, opts.solver);
  return out;
}

} // namespace zermelo
