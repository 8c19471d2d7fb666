#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "zermelo/trajectory.hpp"

using namespace zermelo;

namespace {

// A smooth, curved path for resampling and distance checks.
Trajectory arc_path(int n) {
  Trajectory t;
  t.nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double tau = static_cast<double>(i) / n;
    t.nodes[i] = Vec2(tau, 0.3 * std::sin(std::numbers::pi * tau));
  }
  return t;
}

Trajectory random_path(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  Trajectory t = straight_line({0.0, 0.0}, {1.0, 0.0}, n);
  for (int i = 1; i < n; ++i) t.nodes[i] += Vec2(u(rng), u(rng));
  return t;
}

} // namespace

TEST_CASE("straight line nodes are equally spaced") {
  const Trajectory t = straight_line({0.0, 0.0}, {1.0, 0.0}, 4);
  REQUIRE(t.nodes.size() == 5);
  CHECK(t.nodes[0] == Vec2(0.0, 0.0));
  CHECK(t.nodes[1] == Vec2(0.25, 0.0));
  CHECK(t.nodes[2] == Vec2(0.5, 0.0));
  CHECK(t.nodes[3] == Vec2(0.75, 0.0));
  CHECK(t.nodes[4] == Vec2(1.0, 0.0));

  const Trajectory v = straight_line({0.0, 0.0}, {0.0, 2.0}, 2);
  CHECK(v.nodes[1] == Vec2(0.0, 1.0));

  // Coincident endpoints are degenerate but allowed.
  const Trajectory d = straight_line({0.3, 0.4}, {0.3, 0.4}, 8);
  for (const Vec2& x : d.nodes) CHECK(x == Vec2(0.3, 0.4));

  CHECK(straight_line({0.0, 0.0}, {3.0, 4.0}, 10).arc_length() ==
        doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("scaled deviation magnitude") {
  CHECK(sobolev_norm(Deviation{1.0, 1}) ==
        doctest::Approx(1.0 + std::numbers::pi).epsilon(1e-15));
  CHECK(sobolev_norm(Deviation{1.0, 30}) ==
        doctest::Approx(1.0 + 30.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(sobolev_norm(Deviation{1.0, 1}) == doctest::Approx(4.1416).epsilon(1e-4));
  CHECK(sobolev_norm(Deviation{1.0, 30}) == doctest::Approx(95.248).epsilon(1e-4));
  CHECK(sobolev_norm(Deviation{0.0, 7}) == 0.0);

  // Absolute homogeneity in the amplitude.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const double a = u(rng), c = u(rng);
    const int freq = 1 + (k % 40);
    CHECK(sobolev_norm(Deviation{c * a, freq}) ==
          doctest::Approx(std::abs(c) * sobolev_norm(Deviation{a, freq}))
              .epsilon(1e-14));
  }

  // Total of a list is the sum of the parts.
  const std::vector<Deviation> devs = {{0.5, 1}, {-0.25, 30}};
  CHECK(sobolev_norm(devs) ==
        doctest::Approx(sobolev_norm(devs[0]) + sobolev_norm(devs[1])).epsilon(1e-15));
}

TEST_CASE("amplitude from signed magnitude inverts the norm, keeping the sign") {
  CHECK(amplitude_from_signed_norm(1.0 + std::numbers::pi, 1) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(amplitude_from_signed_norm(-(1.0 + 30.0 * std::numbers::pi), 30) ==
        doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(amplitude_from_signed_norm(0.0, 5) == 0.0);
  for (double s : {0.3, -0.7, 2.0}) {
    for (int k : {1, 30}) {
      const double a = amplitude_from_signed_norm(s, k);
      CHECK(sobolev_norm(Deviation{a, k}) == doctest::Approx(std::abs(s)).epsilon(1e-14));
      CHECK(std::signbit(a) == std::signbit(s));
    }
  }
}

TEST_CASE("unit normals are unit length and perpendicular to the tangent") {
  std::mt19937 rng(17);
  const Trajectory t = random_path(rng, 64);
  const std::vector<Vec2> normals = unit_normals(t);
  REQUIRE(normals.size() == 65);
  for (int i = 0; i <= 64; ++i) {
    CHECK(normals[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    Vec2 tangent;
    if (i == 0)
      tangent = t.nodes[1] - t.nodes[0];
    else if (i == 64)
      tangent = t.nodes[64] - t.nodes[63];
    else
      tangent = t.nodes[i + 1] - t.nodes[i - 1];
    CHECK(std::abs(normals[i].dot(tangent)) <= 1e-9 * (1.0 + tangent.norm()));
  }

  // Zero-length interval is degenerate.
  Trajectory bad = straight_line({0.0, 0.0}, {1.0, 0.0}, 4);
  bad.nodes[2] = bad.nodes[1];
  CHECK_THROWS_AS(unit_normals(bad), degenerate_geometry_error);
}

TEST_CASE("sampled deviation follows a * n * sin(k pi tau)") {
  const Trajectory anchor = straight_line({0.0, 0.0}, {1.0, 0.0}, 8);

  // Straight anchor along +x: every normal is (0, 1); at tau = 0.5 the k=1
  // wave has its crest, so the displacement is the full unit normal.
  const std::vector<Vec2> bump = sample_deviation(anchor, Deviation{1.0, 1});
  CHECK(bump[4].x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bump[4].y() == doctest::Approx(1.0).epsilon(1e-15));

  // Zero amplitude: no displacement anywhere.
  for (const Vec2& v : sample_deviation(anchor, Deviation{0.0, 13}))
    CHECK(v == Vec2::Zero());

  // k = 30 on a grid with 30 | N: the wave vanishes at every tau = i/30.
  const Trajectory fine = straight_line({0.0, 0.0}, {1.0, 0.0}, 60);
  const std::vector<Vec2> wave = sample_deviation(fine, Deviation{0.7, 30});
  for (int i = 0; i <= 60; i += 2) CHECK(wave[i].norm() <= 1e-13);

  // Peak displacement never exceeds |a|, with equality when the grid hits a
  // crest (2N divisible by k).
  double peak = 0.0;
  for (const Vec2& v : wave) peak = std::max(peak, v.norm());
  CHECK(peak <= 0.7 * (1.0 + 1e-15));
  CHECK(peak == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("applying deviations keeps endpoints and commutes") {
  std::mt19937 rng(29);
  const Trajectory anchor = random_path(rng, 128);
  const Deviation d1{0.34, 1}, d2{-0.05, 30};

  const Trajectory out = apply_deviations(anchor, {d1, d2});
  CHECK(out.nodes.front() == anchor.nodes.front());
  CHECK(out.nodes.back() == anchor.nodes.back());

  const Trajectory swapped = apply_deviations(anchor, {d2, d1});
  REQUIRE(out.nodes.size() == swapped.nodes.size());
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    CHECK(out.nodes[i] == swapped.nodes[i]);

  // Empty list: unchanged.
  const Trajectory same = apply_deviations(anchor, {});
  for (std::size_t i = 0; i < same.nodes.size(); ++i)
    CHECK(same.nodes[i] == anchor.nodes[i]);

  // Single deviation agrees with its sampled displacement field.
  const Trajectory one = apply_deviations(anchor, {d1});
  const std::vector<Vec2> disp = sample_deviation(anchor, d1);
  for (std::size_t i = 0; i < one.nodes.size(); ++i)
    CHECK((one.nodes[i] - (anchor.nodes[i] + disp[i])).norm() == 0.0);
}

TEST_CASE("discrete distance approaches the scaled deviation magnitude") {
  // On a fine grid, anchor vs anchor+deviation measures |a| in the node
  // term and |a| k pi in the slope term.
  const int n = 4096;
  const Trajectory anchor = straight_line({0.0, 0.0}, {1.0, 0.0}, n);
  for (const Deviation dev : {Deviation{0.25, 1}, Deviation{0.03, 30}}) {
    const Trajectory moved = apply_deviations(anchor, {dev});
    const double measured = w1inf_distance(anchor, moved);
    CHECK(measured == doctest::Approx(sobolev_norm(dev)).epsilon(0.02));
  }
}

TEST_CASE("discrete distance is a metric") {
  std::mt19937 rng(31);
  const int n = 32;
  for (int trial = 0; trial < 50; ++trial) {
    const Trajectory a = random_path(rng, n);
    const Trajectory b = random_path(rng, n);
    const Trajectory c = random_path(rng, n);
    const double ab = w1inf_distance(a, b);
    const double ba = w1inf_distance(b, a);
    const double ac = w1inf_distance(a, c);
    const double cb = w1inf_distance(c, b);
    CHECK(ab == ba);
    CHECK(ab <= ac + cb + 1e-12);
    CHECK(w1inf_distance(a, a) == 0.0);
    if (trial == 0) CHECK(ab > 0.0);
  }

  // Interior shift by (0, c) is seen by the node term.
  Trajectory p = straight_line({0.0, 0.0}, {1.0, 0.0}, 16);
  Trajectory q = p;
  for (int i = 1; i < 16; ++i) q.nodes[i] += Vec2(0.0, 0.125);
  CHECK(w1inf_distance(p, q) >= 0.125);

  // Different grids cannot be compared.
  const Trajectory other = straight_line({0.0, 0.0}, {1.0, 0.0}, 8);
  CHECK_THROWS_AS(w1inf_distance(p, other), grid_mismatch_error);
}

TEST_CASE("resampling preserves straight lines and endpoints") {
  const Trajectory line = straight_line({0.2, -0.1}, {0.9, 0.4}, 12);
  const Trajectory up = resample(line, 31);
  CHECK(up.nodes.front() == line.nodes.front());
  CHECK(up.nodes.back() == line.nodes.back());
  const Trajectory expect = straight_line({0.2, -0.1}, {0.9, 0.4}, 31);
  for (int i = 0; i <= 31; ++i)
    CHECK((up.nodes[i] - expect.nodes[i]).norm() <= 1e-14);

  // Identity resample keeps every node.
  const Trajectory same = resample(line, 12);
  for (int i = 0; i <= 12; ++i) CHECK(same.nodes[i] == line.nodes[i]);
}

TEST_CASE("resampling a smooth path back and forth stays within O(1/n)") {
  const int n = 256;
  const Trajectory t = arc_path(n);
  const Trajectory down = resample(t, 100);
  const Trajectory back = resample(down, n);
  double node_err = 0.0;
  for (int i = 0; i <= n; ++i)
    node_err = std::max(node_err, (back.nodes[i] - t.nodes[i]).norm());
  // Piecewise-linear interpolation error of a curvature-0.3*pi^2 path on a
  // 1/100 grid is ~ 0.3*pi^2/8 * (1/100)^2 ~ 4e-5.
  CHECK(node_err <= 1e-4);
  CHECK(node_err > 0.0);
}

TEST_CASE("trajectory csv round-trips exactly") {
  std::mt19937 rng(41);
  const Trajectory t = random_path(rng, 17);
  std::ostringstream out;
  write_trajectory_csv(out, t);
  const std::string text = out.str();
  CHECK(text.rfind("tau,x,y\n", 0) == 0);

  std::istringstream in(text);
  const Trajectory back = read_trajectory_csv(in);
  REQUIRE(back.nodes.size() == t.nodes.size());
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    CHECK(back.nodes[i].x() == t.nodes[i].x());
    CHECK(back.nodes[i].y() == t.nodes[i].y());
  }

  std::istringstream bad("x,y\n0,0\n");
  CHECK_THROWS(read_trajectory_csv(bad));
}
