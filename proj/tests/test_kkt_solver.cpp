#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "zermelo/kkt_solver.hpp"

using namespace zermelo;

namespace {

ProblemSpec benchmark_spec(int n) {
  ProblemSpec spec;
  spec.wind = benchmark_field(1.0);
  spec.n = n;
  return spec;
}

// The benchmark reference optimum is used by many cases; solve it once.
const ReferenceOptimum& benchmark_reference() {
  static const ReferenceOptimum ref = [] {
    const auto found = find_reference_optimum(benchmark_spec(512));
    REQUIRE(found.has_value());
    return *found;
  }();
  return ref;
}

Trajectory bent_chord(const ProblemSpec& spec, double amplitude, int frequency = 1) {
  const Trajectory chord = straight_line(spec.origin, spec.destination, spec.n);
  return apply_deviations(chord, {Deviation{amplitude, frequency}});
}

} // namespace

TEST_CASE("zero wind, straight chord: the optimality system is satisfied exactly") {
  ProblemSpec calm;
  calm.n = 64; // power of two keeps the node spacing exact
  KKTState st = initialize_state(straight_line({0.0, 0.0}, {1.0, 0.0}, 64));
  CHECK(st.speed == 1.0);
  CHECK(st.multipliers.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(kkt_residual(calm, st).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("unequal spacing violates only the constraint rows") {
  ProblemSpec calm;
  calm.n = 8;
  // Straight geometry, uneven parameter spacing.
  Trajectory t;
  const double s[] = {0.0, 0.2, 0.25, 0.4, 0.5, 0.62, 0.8, 0.9, 1.0};
  for (double v : s) t.nodes.push_back(Vec2(v, 0.0));
  KKTState st = initialize_state(t);
  const Eigen::VectorXd F = kkt_residual(calm, st);
  const int stat = 2 * (calm.n - 1) + 1;
  CHECK(F.head(stat).lpNorm<Eigen::Infinity>() <= 1e-13);
  CHECK(F.tail(calm.n).lpNorm<Eigen::Infinity>() > 1e-3);
}

TEST_CASE("state initialization uses the path length and zero multipliers") {
  const Trajectory chord = straight_line({0.0, 0.0}, {1.0, 0.0}, 512);
  const KKTState st = initialize_state(chord);
  CHECK(st.speed == 1.0);
  CHECK(st.multipliers.size() == 512);
  CHECK(st.multipliers.lpNorm<Eigen::Infinity>() == 0.0);

  // Half-circle of radius 0.5 between the endpoints: length pi/2 up to the
  // polygonal sampling deficit.
  Trajectory arc;
  arc.nodes.resize(513);
  for (int i = 0; i <= 512; ++i) {
    const double tau = i / 512.0;
    arc.nodes[i] = Vec2(0.5 - 0.5 * std::cos(std::numbers::pi * tau),
                        0.5 * std::sin(std::numbers::pi * tau));
  }
  CHECK(std::abs(initialize_state(arc).speed - std::numbers::pi / 2.0) <= 1e-5);
}

TEST_CASE("zero wind: a bent start straightens out") {
  ProblemSpec calm;
  calm.n = 128;
  KKTState st = initialize_state(bent_chord(calm, 0.05));
  const SolveReport rep = newton_solve(calm, st);
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.travel_time == doctest::Approx(1.0).epsilon(1e-10));
  for (const Vec2& x : st.trajectory.nodes) CHECK(std::abs(x.y()) <= 1e-8);
}

TEST_CASE("benchmark reference optimum") {
  const ProblemSpec spec = benchmark_spec(512);
  const ReferenceOptimum& ref = benchmark_reference();

  // Regression fixture for the optimal time, and the wind strictly helps.
  CHECK(ref.travel_time == doctest::Approx(0.88541962526176521).epsilon(1e-9));
  const double T_straight =
      travel_time(spec, straight_line(spec.origin, spec.destination, 512));
  CHECK(ref.travel_time < T_straight);

  // The returned state satisfies the optimality system to tolerance.
  CHECK(kkt_residual(spec, ref.state).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK(ref.state.speed > 0.0);

  // Stationarity in the speed forces the multipliers to balance.
  CHECK(std::abs(ref.state.multipliers.sum()) <= 1e-12);

  // Uniform ground speed across every interval.
  double worst = 0.0;
  for (int i = 0; i < 512; ++i)
    worst = std::max(worst,
                     std::abs(ref.state.trajectory.velocity(i).norm() - ref.state.speed));
  CHECK(worst <= 1e-6);
}

TEST_CASE("the discrete multiplier is small but not zero") {
  // With the midpoint discretization, the continuous fact that the
  // multiplier vanishes at the optimum survives only to O(h^2): the exact
  // discrete multiplier scales down with refinement but is nonzero, so the
  // multiplier-free residual gauge is small without reaching solver
  // tolerance.
  const ReferenceOptimum& ref = benchmark_reference();
  const double lam512 = ref.state.multipliers.lpNorm<Eigen::Infinity>();
  CHECK(lam512 > 1e-12);
  CHECK(lam512 <= 1e-4);
  const double g512 = stationarity_residual(benchmark_spec(512), ref.state);
  CHECK(g512 <= 1e-5);

  const ProblemSpec coarse = benchmark_spec(256);
  const auto ref256 = find_reference_optimum(coarse);
  REQUIRE(ref256.has_value());
  const double g256 = stationarity_residual(coarse, ref256->state);
  CHECK(g256 <= 1e-4);
  // Refinement shrinks the gauge (measured decay is about eightfold per
  // halving; require a conservative factor).
  CHECK(g512 <= g256 / 3.0);
}

TEST_CASE("restart at the solution costs zero or one iteration") {
  const ProblemSpec spec = benchmark_spec(512);
  const ReferenceOptimum& ref = benchmark_reference();

  KKTState full = ref.state;
  const SolveReport r_full = newton_solve(spec, full);
  CHECK(r_full.status == SolveStatus::Converged);
  CHECK(r_full.iterations == 0);

  KKTState zeroed = initialize_state(ref.state.trajectory);
  const SolveReport r_zero = newton_solve(spec, zeroed);
  CHECK(r_zero.status == SolveStatus::Converged);
  CHECK(r_zero.iterations <= 1);
}

TEST_CASE("small perturbations converge back with quadratic tails") {
  const ProblemSpec spec = benchmark_spec(512);
  const ReferenceOptimum& ref = benchmark_reference();

  // Scaled-norm-0.05 start: inside the reported well-behaved region.
  {
    const double a = amplitude_from_signed_norm(0.05, 1);
    KKTState st = initialize_state(apply_deviations(ref.state.trajectory, {Deviation{a, 1}}));
    const SolveReport rep = newton_solve(spec, st);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(w1inf_distance(st.trajectory, ref.state.trajectory) <= 1e-6);
    CHECK(classify(rep, st, ref));
  }

  // Scaled-norm-1e-3 start: the residual history contracts quadratically.
  {
    const double a = amplitude_from_signed_norm(1e-3, 1);
    KKTState st = initialize_state(apply_deviations(ref.state.trajectory, {Deviation{a, 1}}));
    const SolveReport rep = newton_solve(spec, st);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.iterations <= 6);
    int tail = 0;
    for (std::size_t k = 0; k + 1 < rep.residual_history.size(); ++k) {
      const double r = rep.residual_history[k];
      if (r > 1e-2) continue;
      ++tail;
      CHECK(rep.residual_history[k + 1] <= 100.0 * r * r);
    }
    CHECK(tail <= 6);
  }
}

TEST_CASE("a far start converges to a different stationary path") {
  const ProblemSpec spec = benchmark_spec(512);
  const ReferenceOptimum& ref = benchmark_reference();
  KKTState st = initialize_state(bent_chord(spec, -0.2));
  const SolveReport rep = newton_solve(spec, st);
  CHECK(rep.status == SolveStatus::Converged);
  const double dist = w1inf_distance(st.trajectory, ref.state.trajectory);
  CHECK(dist > 1e-3);
  CHECK(!classify(rep, st, ref));
  CHECK(rep.travel_time > ref.travel_time);

  // Membership is monotone in the threshold.
  bool prev = false;
  for (double eps : {1e-4, 1e-3, 1e-2, 1.0, 10.0}) {
    const bool now = classify(rep, st, ref, eps);
    CHECK((prev ? now : true));
    prev = now;
  }
  CHECK(classify(rep, st, ref, 2.0 * dist));
}

TEST_CASE("solver failure modes are reported, not thrown") {
  const ProblemSpec spec = benchmark_spec(512);

  // Undamped steps from this start blow up.
  {
    KKTState st = initialize_state(bent_chord(spec, -0.05));
    const SolveReport rep = newton_solve(spec, st);
    CHECK(rep.status == SolveStatus::Diverged);
    CHECK(std::isnan(rep.travel_time));
  }

  // Iteration cap.
  {
    KKTState st = initialize_state(bent_chord(spec, 0.1));
    SolverOptions opts;
    opts.max_iterations = 3;
    const SolveReport rep = newton_solve(spec, st, opts);
    CHECK(rep.status == SolveStatus::MaxIterations);
    CHECK(rep.iterations == 3);
    CHECK(rep.residual_norm > opts.tolerance);
  }

  // A fold-back path between coincident endpoints duplicates constraint
  // directions, so the system matrix is singular.
  {
    ProblemSpec degenerate = benchmark_spec(2);
    degenerate.origin = {0.0, 0.0};
    degenerate.destination = {0.0, 0.0};
    Trajectory fold;
    fold.nodes = {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}};
    KKTState st = initialize_state(fold);
    const SolveReport rep = newton_solve(degenerate, st);
    CHECK(rep.status == SolveStatus::SingularSystem);
  }

  // Grid mismatch is caller error, though.
  {
    KKTState st = initialize_state(straight_line({0.0, 0.0}, {1.0, 0.0}, 32));
    CHECK_THROWS_AS(newton_solve(spec, st), grid_mismatch_error);
  }
}

TEST_CASE("identical inputs give identical solves") {
  const ProblemSpec spec = benchmark_spec(512);
  KKTState a = initialize_state(bent_chord(spec, 0.1));
  KKTState b = initialize_state(bent_chord(spec, 0.1));
  const SolveReport ra = newton_solve(spec, a);
  const SolveReport rb = newton_solve(spec, b);
  CHECK(ra.status == rb.status);
  CHECK(ra.iterations == rb.iterations);
  CHECK(ra.travel_time == rb.travel_time);
  REQUIRE(ra.residual_history.size() == rb.residual_history.size());
  for (std::size_t i = 0; i < ra.residual_history.size(); ++i)
    CHECK(ra.residual_history[i] == rb.residual_history[i]);
  for (std::size_t i = 0; i < a.trajectory.nodes.size(); ++i)
    CHECK(a.trajectory.nodes[i] == b.trajectory.nodes[i]);
}

TEST_CASE("mirrored problem solves to the mirrored solution") {
  const ProblemSpec spec = benchmark_spec(512);
  std::vector<Vortex> negated = spec.wind.vortices();
  for (Vortex& v : negated) v.strength = -v.strength;
  ProblemSpec mirrored = spec;
  mirrored.wind = WindField(std::move(negated));

  const Trajectory start = bent_chord(spec, 0.1);
  Trajectory mstart = start;
  for (Vec2& p : mstart.nodes) p.y() = -p.y();

  // Functional level.
  CHECK(std::abs(travel_time(spec, start) - travel_time(mirrored, mstart)) <= 1e-12);

  // Full solver pipeline level.
  KKTState a = initialize_state(start);
  KKTState b = initialize_state(mstart);
  const SolveReport ra = newton_solve(spec, a);
  const SolveReport rb = newton_solve(mirrored, b);
  CHECK(ra.status == SolveStatus::Converged);
  CHECK(rb.status == ra.status);
  CHECK(rb.iterations == ra.iterations);
  CHECK(std::abs(ra.travel_time - rb.travel_time) <= 1e-12);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.trajectory.nodes.size(); ++i) {
    worst = std::max(worst, std::abs(a.trajectory.nodes[i].x() - b.trajectory.nodes[i].x()));
    worst = std::max(worst, std::abs(a.trajectory.nodes[i].y() + b.trajectory.nodes[i].y()));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("multistart reference search") {
  // Zero wind: the straight chord wins with unit time and speed.
  ProblemSpec calm;
  calm.n = 128;
  const auto ref = find_reference_optimum(calm);
  REQUIRE(ref.has_value());
  CHECK(ref->travel_time == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ref->state.speed == doctest::Approx(1.0).epsilon(1e-10));
  const Trajectory chord = straight_line({0.0, 0.0}, {1.0, 0.0}, 128);
  CHECK(w1inf_distance(ref->state.trajectory, chord) <= 1e-8);
}
