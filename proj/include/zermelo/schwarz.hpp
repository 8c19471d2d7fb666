#ifndef ZERMELO_SCHWARZ_HPP
#define ZERMELO_SCHWARZ_HPP

#include <vector>

#include "zermelo/kkt_solver.hpp"

namespace zermelo {

/// One subdomain: the node range [first, last] of the global grid whose
/// interior nodes are optimized while the two boundary nodes stay pinned.
struct Segment {
  int first = 0;
  int last = 0;

  int intervals() const { return last - first; }
};

/// Segments of one sweep; within a plan the interiors are disjoint, so the
/// sweep may visit them in any order.
using SegmentPlan = std::vector<Segment>;

/// Split the trajectory into `segments` pieces of roughly equal arc length.
/// When `shifted`, the cut points are moved half a piece along, producing
/// `segments + 1` pieces whose cuts interleave the unshifted ones; the
/// alternation gives overlap across sweeps.  Cut fractions are snapped to
/// the nearest grid node (ties toward the lower index).  Throws
/// segment_too_short_error when any piece gets fewer than 4 intervals.
SegmentPlan make_plan(const Trajectory& t, int segments, bool shifted);

/// Newton-solve the sub-problem on one segment, holding its end nodes
/// fixed.  The segment is accepted (written back) only when the sub-solve
/// converges and does not increase the segment's travel time; otherwise the
/// trajectory is left untouched.  Returns true when accepted.
bool optimize_segment(const ProblemSpec& spec, Trajectory& t, const Segment& seg,
                      const SolverOptions& opts = {});

struct SchwarzOptions {
  int segments = 11;
  int passes = 2;                   // unshifted, shifted, unshifted, ...
  SolverOptions solver;
};

struct SchwarzReport {
  std::vector<double> pass_times;   // travel time after each pass
  int segments_accepted = 0;
  int segments_rejected = 0;
};

/// Alternating-sweep smoothing: repeatedly optimize the segments of an
/// unshifted plan, then of a shifted plan.  Travel time never increases.
SchwarzReport schwarz_smooth(const ProblemSpec& spec, Trajectory& t,
                             const SchwarzOptions& opts = {});

struct SmoothedSolveReport {
  SchwarzReport smoothing;
  SolveReport solve;
};

/// Smooth the start, then run the global Newton solve from the smoothed
/// shape.
SmoothedSolveReport smooth_then_solve(const ProblemSpec& spec, KKTState& state,
                                      const SchwarzOptions& opts = {});

} // namespace zermelo

#endif
