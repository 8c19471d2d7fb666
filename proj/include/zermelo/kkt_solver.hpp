#ifndef ZERMELO_KKT_SOLVER_HPP
#define ZERMELO_KKT_SOLVER_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "zermelo/timefunctional.hpp"
#include "zermelo/trajectory.hpp"

namespace zermelo {

/// Unknowns of the equality-constrained problem: the interior nodes, the
/// common chord-speed parameter L, and one multiplier per interval for the
/// uniform-speed constraint |v_i|^2 = L^2.
struct KKTState {
  Trajectory trajectory;            // full polyline, endpoints fixed
  double speed = 0.0;               // L
  Eigen::VectorXd multipliers;      // size n

  int intervals() const { return trajectory.intervals(); }
};

enum class SolveStatus {
  Converged,
  MaxIterations,
  SingularSystem,
  Diverged,
};

std::string to_string(SolveStatus s);

struct SolverOptions {
  double tolerance = 1e-10;         // on the sup norm of the KKT residual
  int max_iterations = 100;
  HessianMode hessian = HessianMode::Analytic;
  // A step is declared divergent when any node leaves this box or any
  // unknown stops being finite.
  double box_x_min = -5.0, box_x_max = 6.0;
  double box_y_min = -5.0, box_y_max = 5.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double residual_norm = 0.0;       // sup norm at exit
  double travel_time = 0.0;         // value at exit (NaN when diverged)
  std::vector<double> residual_history;
};

/// Full nonlinear KKT residual at a state; sup norm decides convergence.
Eigen::VectorXd kkt_residual(const ProblemSpec& spec, const KKTState& state);

/// Multiplier-free stationarity gauge: sup norm of the KKT residual at the
/// state's trajectory with the multipliers zeroed.
double stationarity_residual(const ProblemSpec& spec, const KKTState& state);

/// Initial unknowns for a given shape: speed from its arc length, zero
/// multipliers.
KKTState initialize_state(const Trajectory& shape);

/// Undamped Newton iteration on the KKT system from the given start.
/// The state is updated in place; the report tells how it ended.
SolveReport newton_solve(const ProblemSpec& spec, KKTState& state,
                         const SolverOptions& opts = {});

/// A trusted optimum used as the yardstick for basin membership.
struct ReferenceOptimum {
  KKTState state;
  double travel_time = 0.0;
};

/// Did a solve land on the reference?  True iff the report says Converged
/// and the final trajectory is within eps of the reference in the discrete
/// W^{1,inf} distance.
bool classify(const SolveReport& report, const KKTState& state,
              const ReferenceOptimum& ref, double eps = 1e-3);

struct MultistartOptions {
  SolverOptions solver;
  // Signed fundamental-mode amplitudes used to seed the search, besides the
  // straight chord itself.
  std::vector<double> amplitudes = {-0.2, -0.15, -0.1, -0.05, 0.05, 0.1, 0.15, 0.2};
};

/// Best converged optimum over the straight chord and sine-perturbed starts;
/// empty when every start fails.
std::optional<ReferenceOptimum> find_reference_optimum(const ProblemSpec& spec,
                                                       const MultistartOptions& opts = {});

} // namespace zermelo

#endif
