#ifndef ZERMELO_EXPERIMENTS_HPP
#define ZERMELO_EXPERIMENTS_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "zermelo/kkt_solver.hpp"
#include "zermelo/schwarz.hpp"

namespace zermelo {

/// Grid of perturbed starts: each cell perturbs the reference shape by a
/// high-frequency and a low-frequency normal sine wave with the given
/// signed scaled-norm magnitudes, then runs the solver from it.
struct SweepSpec {
  double hf_min = -0.6, hf_max = 0.6;
  int hf_steps = 61;
  double lf_min = -0.6, lf_max = 0.6;
  int lf_steps = 61;
  int k_hf = 30;
  int k_lf = 1;
  bool smooth_first = false;        // run alternating smoothing before Newton
  SchwarzOptions schwarz;           // used only when smooth_first
  SolverOptions solver;
  double classify_eps = 1e-3;       // basin-membership distance threshold
  int threads = 1;
};

struct CellResult {
  double s_hf = 0.0;                // signed magnitude of the hf deviation
  double s_lf = 0.0;
  bool converged = false;           // landed on the reference optimum
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double travel_time = 0.0;         // value at exit; NaN when the solve diverged
  double distance = 0.0;            // final distance to the reference shape
};

struct ConvergenceMap {
  SweepSpec spec;
  std::vector<CellResult> cells;    // row-major, hf index fastest

  const CellResult& at(int i_hf, int i_lf) const;
};

/// i-th point of the uniform grid with `steps` points over [lo, hi].
double sweep_value(double lo, double hi, int steps, int i);

/// Run the whole grid.  Cells are distributed over `spec.threads` workers;
/// results land in a fixed cell order, so the map is identical for any
/// thread count.  `progress`, when set, is called after each finished cell
/// with the number done so far.
ConvergenceMap run_sweep(const ProblemSpec& problem, const ReferenceOptimum& ref,
                         const SweepSpec& spec,
                         const std::function<void(int)>& progress = {});

/// Positional error sizes of one perturbation pair: the amplitudes
/// |s| / (1 + k pi) recombined as a worst-case displacement and a
/// worst-case heading change.
struct ErrorSizes {
  double distance = 0.0;            // |s_lf|/(1+k_lf pi) + |s_hf|/(1+k_hf pi)
  double angular = 0.0;             // same amplitudes weighted by k pi
};

ErrorSizes error_transform(double s_hf, double s_lf, int k_hf, int k_lf);

/// Largest combined deviation norm |s_lf| + |s_hf| such that every sampled
/// cell with combined norm at or below it converged.  Cells are ranked by
/// the norm; equal norms stand or fall together.  Zero when even the
/// origin cell failed.
double empirical_radius(const ConvergenceMap& map);

/// CSV with header "s_hf,s_lf,converged,iterations,T,distance".
void write_map_csv(std::ostream& out, const ConvergenceMap& map);

/// Per-cell distance/angular error sizes with the convergence flag kept:
/// header "s_hf,s_lf,distance_error,angular_error,converged".
void write_transformed_csv(std::ostream& out, const ConvergenceMap& map);

/// Self-contained SVG picture of the map: one square per cell, light when
/// converged and dark when not, with dashed iso-norm diamonds at the given
/// combined-norm levels.
void write_map_svg(std::ostream& out, const ConvergenceMap& map,
                   const std::vector<double>& iso_levels = {0.1, 0.3, 0.6});

} // namespace zermelo

#endif
