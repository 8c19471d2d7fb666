#include "zermelo/kkt_solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

namespace zermelo {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::SingularSystem: return "singular-system";
    case SolveStatus::Diverged: return "diverged";
  }
  return "unknown";
}

namespace {

// Unknown vector layout: interior nodes x_1..x_{n-1} (2 coordinates each),
// then the speed L, then the n interval multipliers.
int dim_of(int n) { return 2 * (n - 1) + 1 + n; }

struct Assembly {
  Eigen::VectorXd residual;
  std::vector<Eigen::Triplet<double>> jacobian;
};

// Residual of the full optimality system and, when `with_jacobian`, its
// (symmetric) Jacobian in triplet form.
//
// The system couples stationarity in the interior nodes, stationarity in L,
// and the scaled uniform-speed constraints c_i = h (|v_i|^2 - L^2).
Assembly assemble(const ProblemSpec& spec, const KKTState& state, HessianMode mode,
                  bool with_jacobian) {
  const int n = spec.n;
  const double h = 1.0 / n;
  const double N = static_cast<double>(n);
  const int iL = 2 * (n - 1);         // index of L
  const int il = iL + 1;              // first multiplier index
  const Trajectory& t = state.trajectory;
  const double L = state.speed;
  const Eigen::VectorXd& lam = state.multipliers;

  const Evaluation ev = evaluate_with_derivatives(spec, t, mode);

  Assembly out;
  out.residual = Eigen::VectorXd::Zero(dim_of(n));

  // Stationarity in the interior nodes: objective gradient plus the two
  // constraint terms touching each node, d c_i/d x_i = -2 v_i and
  // d c_i/d x_{i+1} = +2 v_i.
  for (int a = 1; a <= n - 1; ++a) {
    const Vec2 g = ev.gradient.segment<2>(2 * (a - 1)) +
                   2.0 * lam(a - 1) * t.velocity(a - 1) - 2.0 * lam(a) * t.velocity(a);
    out.residual.segment<2>(2 * (a - 1)) = g;
  }
  // Stationarity in L.
  out.residual(iL) = -2.0 * h * L * lam.sum();
  // The constraints themselves.
  for (int i = 0; i < n; ++i)
    out.residual(il + i) = h * (t.velocity(i).squaredNorm() - L * L);

  if (!with_jacobian) return out;

  auto& trip = out.jacobian;
  trip.reserve(26 * n);
  auto push_block = [&trip](int row, int col, const Mat2& B) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) trip.emplace_back(row + r, col + c, B(r, c));
  };

  // Node-node block: objective Hessian plus the constraint curvature
  // 2 N lambda_i on the diagonal blocks and -2 N lambda_i on the couplings.
  for (int a = 1; a <= n - 1; ++a) {
    Mat2 D = ev.diag[a - 1];
    D += 2.0 * N * (lam(a - 1) + lam(a)) * Mat2::Identity();
    push_block(2 * (a - 1), 2 * (a - 1), D);
  }
  for (int a = 1; a <= n - 2; ++a) {
    Mat2 O = ev.offdiag[a - 1];
    O += -2.0 * N * lam(a) * Mat2::Identity();
    push_block(2 * (a - 1), 2 * a, O);
    push_block(2 * a, 2 * (a - 1), O.transpose());
  }

  // Node-multiplier couplings (and their transposes).
  for (int a = 1; a <= n - 1; ++a) {
    const Vec2 vprev = 2.0 * t.velocity(a - 1);
    const Vec2 vnext = -2.0 * t.velocity(a);
    const int row = 2 * (a - 1);
    trip.emplace_back(row, il + a - 1, vprev.x());
    trip.emplace_back(row + 1, il + a - 1, vprev.y());
    trip.emplace_back(il + a - 1, row, vprev.x());
    trip.emplace_back(il + a - 1, row + 1, vprev.y());
    trip.emplace_back(row, il + a, vnext.x());
    trip.emplace_back(row + 1, il + a, vnext.y());
    trip.emplace_back(il + a, row, vnext.x());
    trip.emplace_back(il + a, row + 1, vnext.y());
  }

  // L row/column.
  trip.emplace_back(iL, iL, -2.0 * h * lam.sum());
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(iL, il + i, -2.0 * h * L);
    trip.emplace_back(il + i, iL, -2.0 * h * L);
  }
  return out;
}

bool state_is_finite(const KKTState& state) {
  for (const Vec2& x : state.trajectory.nodes)
    if (!x.allFinite()) return false;
  return std::isfinite(state.speed) && state.multipliers.allFinite();
}

bool inside_box(const KKTState& state, const SolverOptions& o) {
  for (const Vec2& x : state.trajectory.nodes) {
    if (x.x() < o.box_x_min || x.x() > o.box_x_max) return false;
    if (x.y() < o.box_y_min || x.y() > o.box_y_max) return false;
  }
  return true;
}

} // namespace

Eigen::VectorXd kkt_residual(const ProblemSpec& spec, const KKTState& state) {
  return assemble(spec, state, HessianMode::Analytic, false).residual;
}

double stationarity_residual(const ProblemSpec& spec, const KKTState& state) {
  KKTState zeroed = state;
  zeroed.multipliers.setZero();
  return kkt_residual(spec, zeroed).lpNorm<Eigen::Infinity>();
}

KKTState initialize_state(const Trajectory& shape) {
  KKTState s;
  s.trajectory = shape;
  s.speed = shape.arc_length();
  s.multipliers = Eigen::VectorXd::Zero(shape.intervals());
  return s;
}

SolveReport newton_solve(const ProblemSpec& spec, KKTState& state,
                         const SolverOptions& opts) {
  spec.validate();
  const int n = spec.n;
  if (state.intervals() != n || state.multipliers.size() != n)
    throw grid_mismatch_error("newton_solve: state grid does not match the problem");

  SolveReport report;
  const int dim = dim_of(n);
  Eigen::SparseMatrix<double> J(dim, dim);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  auto finish = [&](SolveStatus status, int iters) {
    report.status = status;
    report.iterations = iters;
    if (status == SolveStatus::Diverged) {
      report.travel_time = std::numeric_limits<double>::quiet_NaN();
    } else {
      report.travel_time = travel_time(spec, state.trajectory);
    }
    return report;
  };

  for (int iter = 0;; ++iter) {
    Assembly a;
    try {
      a = assemble(spec, state, opts.hessian, true);
    } catch (const degenerate_geometry_error&) {
      return finish(SolveStatus::Diverged, iter);
    }
    const double res = a.residual.lpNorm<Eigen::Infinity>();
    report.residual_history.push_back(res);
    report.residual_norm = res;
    if (!std::isfinite(res)) return finish(SolveStatus::Diverged, iter);
    if (res <= opts.tolerance) return finish(SolveStatus::Converged, iter);
    if (iter >= opts.max_iterations) return finish(SolveStatus::MaxIterations, iter);

    J.setFromTriplets(a.jacobian.begin(), a.jacobian.end());
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return finish(SolveStatus::SingularSystem, iter);
    const Eigen::VectorXd step = lu.solve(a.residual);
    if (!step.allFinite()) return finish(SolveStatus::SingularSystem, iter);

    for (int b = 1; b <= n - 1; ++b)
      state.trajectory.nodes[b] -= step.segment<2>(2 * (b - 1));
    state.speed -= step(2 * (n - 1));
    state.multipliers -= step.tail(n);

    if (!state_is_finite(state) || !inside_box(state, opts))
      return finish(SolveStatus::Diverged, iter + 1);
  }
}

bool classify(const SolveReport& report, const KKTState& state,
              const ReferenceOptimum& ref, double eps) {
  if (report.status != SolveStatus::Converged) return false;
  return w1inf_distance(state.trajectory, ref.state.trajectory) <= eps;
}

std::optional<ReferenceOptimum> find_reference_optimum(const ProblemSpec& spec,
                                                       const MultistartOptions& opts) {
  spec.validate();
  const Trajectory chord = straight_line(spec.origin, spec.destination, spec.n);
  std::vector<Trajectory> starts;
  starts.push_back(chord);
  for (double a : opts.amplitudes)
    starts.push_back(apply_deviations(chord, {Deviation{a, 1}}));

  std::optional<ReferenceOptimum> best;
  for (const Trajectory& start : starts) {
    KKTState state = initialize_state(start);
    const SolveReport rep = newton_solve(spec, state, opts.solver);
    if (rep.status != SolveStatus::Converged) continue;
    if (!best || rep.travel_time < best->travel_time) {
      best = ReferenceOptimum{state, rep.travel_time};
    }
  }
  return best;
}

} // namespace zermelo
