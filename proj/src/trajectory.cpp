#include "zermelo/trajectory.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace zermelo {

double Trajectory::arc_length() const {
  double len = 0.0;
  for (int i = 0; i + 1 < static_cast<int>(nodes.size()); ++i)
    len += (nodes[i + 1] - nodes[i]).norm();
  return len;
}

Trajectory straight_line(const Vec2& origin, const Vec2& destination, int n) {
  if (n < 1) throw std::invalid_argument("straight_line: need at least one interval");
  Trajectory t;
  t.nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double tau = static_cast<double>(i) / n;
    t.nodes[i] = (1.0 - tau) * origin + tau * destination;
  }
  t.nodes[0] = origin;
  t.nodes[n] = destination;
  return t;
}

double sobolev_norm(const Deviation& dev) {
  return std::abs(dev.amplitude) * (1.0 + dev.frequency * std::numbers::pi);
}

double sobolev_norm(const std::vector<Deviation>& devs) {
  double total = 0.0;
  for (const Deviation& d : devs) total += sobolev_norm(d);
  return total;
}

double amplitude_from_signed_norm(double signed_norm, int frequency) {
  return signed_norm / (1.0 + frequency * std::numbers::pi);
}

std::vector<Vec2> unit_normals(const Trajectory& base) {
  const int n = base.intervals();
  if (n < 1) throw degenerate_geometry_error("unit_normals: empty trajectory");
  for (int i = 0; i < n; ++i)
    if (base.nodes[i + 1] == base.nodes[i])
      throw degenerate_geometry_error("unit_normals: zero-length interval " +
                                      std::to_string(i));
  std::vector<Vec2> normals(n + 1);
  for (int i = 0; i <= n; ++i) {
    Vec2 tangent;
    if (i == 0)
      tangent = base.nodes[1] - base.nodes[0];
    else if (i == n)
      tangent = base.nodes[n] - base.nodes[n - 1];
    else
      tangent = base.nodes[i + 1] - base.nodes[i - 1];
    const double len = tangent.norm();
    if (len == 0.0)
      throw degenerate_geometry_error("unit_normals: zero tangent at node " + std::to_string(i));
    normals[i] = Vec2(-tangent.y(), tangent.x()) / len;
  }
  return normals;
}

std::vector<Vec2> sample_deviation(const Trajectory& anchor, const Deviation& dev) {
  const int n = anchor.intervals();
  const std::vector<Vec2> normals = unit_normals(anchor);
  std::vector<Vec2> out(n + 1, Vec2::Zero());
  for (int i = 1; i < n; ++i) {
    const double tau = static_cast<double>(i) / n;
    out[i] = (dev.amplitude * std::sin(dev.frequency * std::numbers::pi * tau)) *
             normals[i];
  }
  return out;
}

Trajectory apply_deviations(const Trajectory& anchor, const std::vector<Deviation>& devs) {
  const int n = anchor.intervals();
  const std::vector<Vec2> normals = unit_normals(anchor);
  Trajectory out = anchor;
  // Interior nodes only: the endpoints stay bitwise identical no matter how
  // sin(k pi) rounds.  All perturbations are summed before touching the
  // anchor, so the result cannot depend on the order of devs.
  for (int i = 1; i < n; ++i) {
    const double tau = static_cast<double>(i) / n;
    double displacement = 0.0;
    for (const Deviation& d : devs)
      displacement += d.amplitude * std::sin(d.frequency * std::numbers::pi * tau);
    out.nodes[i] += displacement * normals[i];
  }
  return out;
}

double w1inf_distance(const Trajectory& a, const Trajectory& b) {
  if (a.intervals() != b.intervals())
    throw grid_mismatch_error("w1inf_distance: trajectories use different grids");
  const int n = a.intervals();
  double node_max = 0.0;
  for (int i = 0; i <= n; ++i)
    node_max = std::max(node_max, (a.nodes[i] - b.nodes[i]).norm());
  double slope_max = 0.0;
  for (int i = 0; i < n; ++i)
    slope_max = std::max(slope_max, (a.velocity(i) - b.velocity(i)).norm());
  return node_max + slope_max;
}

Trajectory resample(const Trajectory& t, int n) {
  if (n < 1) throw std::invalid_argument("resample: need at least one interval");
  const int m = t.intervals();
  if (m < 1) throw degenerate_geometry_error("resample: empty trajectory");
  Trajectory out;
  out.nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) * m / n;
    int k = static_cast<int>(std::floor(u));
    if (k >= m) k = m - 1;
    const double frac = u - k;
    out.nodes[i] = (1.0 - frac) * t.nodes[k] + frac * t.nodes[k + 1];
  }
  out.nodes[0] = t.nodes.front();
  out.nodes[n] = t.nodes.back();
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "tau,x,y\n";
  const int n = t.intervals();
  for (int i = 0; i <= n; ++i) {
    const double tau = static_cast<double>(i) / n;
    out << format_double(tau) << ',' << format_double(t.nodes[i].x()) << ','
        << format_double(t.nodes[i].y()) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("tau,x,y", 0) != 0)
    throw std::runtime_error("trajectory csv: missing tau,x,y header");
  Trajectory t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tau_s, x_s, y_s;
    if (!std::getline(row, tau_s, ',') || !std::getline(row, x_s, ',') ||
        !std::getline(row, y_s))
      throw std::runtime_error("trajectory csv: malformed row: " + line);
    t.nodes.emplace_back(std::stod(x_s), std::stod(y_s));
  }
  if (t.nodes.size() < 2) throw std::runtime_error("trajectory csv: fewer than two nodes");
  return t;
}

} // namespace zermelo
