#include "zermelo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

namespace zermelo {

const CellResult& ConvergenceMap::at(int i_hf, int i_lf) const {
  return cells[static_cast<std::size_t>(i_lf) * spec.hf_steps + i_hf];
}

double sweep_value(double lo, double hi, int steps, int i) {
  if (steps < 2) throw invalid_config_error("sweep axis needs at least 2 steps");
  const double t = static_cast<double>(i) / (steps - 1);
  return lo * (1.0 - t) + hi * t;
}

namespace {

CellResult run_cell(const ProblemSpec& problem, const ReferenceOptimum& ref,
                    const SweepSpec& spec, int i_hf, int i_lf) {
  CellResult cell;
  cell.s_hf = sweep_value(spec.hf_min, spec.hf_max, spec.hf_steps, i_hf);
  cell.s_lf = sweep_value(spec.lf_min, spec.lf_max, spec.lf_steps, i_lf);

  const std::vector<Deviation> devs = {
      {amplitude_from_signed_norm(cell.s_lf, spec.k_lf), spec.k_lf},
      {amplitude_from_signed_norm(cell.s_hf, spec.k_hf), spec.k_hf},
  };
  const Trajectory start = apply_deviations(ref.state.trajectory, devs);

  KKTState state = initialize_state(start);
  SolveReport rep;
  if (spec.smooth_first) {
    SchwarzOptions sch = spec.schwarz;
    sch.solver = spec.solver;
    rep = smooth_then_solve(problem, state, sch).solve;
  } else {
    rep = newton_solve(problem, state, spec.solver);
  }

  cell.status = rep.status;
  cell.iterations = rep.iterations;
  cell.travel_time = rep.travel_time;
  cell.converged = classify(rep, state, ref, spec.classify_eps);
  bool finite = true;
  for (const Vec2& x : state.trajectory.nodes) finite = finite && x.allFinite();
  cell.distance = finite ? w1inf_distance(state.trajectory, ref.state.trajectory)
                         : std::numeric_limits<double>::quiet_NaN();
  return cell;
}

} // namespace

ConvergenceMap run_sweep(const ProblemSpec& problem, const ReferenceOptimum& ref,
                         const SweepSpec& spec,
                         const std::function<void(int)>& progress) {
  problem.validate();
  if (spec.hf_steps < 2 || spec.lf_steps < 2)
    throw invalid_config_error("sweep axes need at least 2 steps");
  if (spec.threads < 1) throw invalid_config_error("threads must be at least 1");

  ConvergenceMap map;
  map.spec = spec;
  const int total = spec.hf_steps * spec.lf_steps;
  map.cells.resize(total);

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;

  auto worker = [&]() {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= total) return;
      const int i_hf = k % spec.hf_steps;
      const int i_lf = k / spec.hf_steps;
      map.cells[k] = run_cell(problem, ref, spec, i_hf, i_lf);
      const int finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(finished);
      }
    }
  };

  if (spec.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(spec.threads);
    for (int t = 0; t < spec.threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return map;
}

ErrorSizes error_transform(double s_hf, double s_lf, int k_hf, int k_lf) {
  const double a_hf = std::abs(amplitude_from_signed_norm(s_hf, k_hf));
  const double a_lf = std::abs(amplitude_from_signed_norm(s_lf, k_lf));
  ErrorSizes e;
  e.distance = a_lf + a_hf;
  e.angular = a_lf * k_lf * std::numbers::pi + a_hf * k_hf * std::numbers::pi;
  return e;
}

double empirical_radius(const ConvergenceMap& map) {
  struct Entry {
    double norm;
    bool converged;
  };
  std::vector<Entry> entries;
  entries.reserve(map.cells.size());
  for (const CellResult& c : map.cells)
    entries.push_back({std::abs(c.s_lf) + std::abs(c.s_hf), c.converged});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.norm < b.norm; });

  double radius = 0.0;
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t j = i;
    bool all_ok = true;
    while (j < entries.size() && entries[j].norm == entries[i].norm) {
      all_ok = all_ok && entries[j].converged;
      ++j;
    }
    if (!all_ok) break;
    radius = entries[i].norm;
    i = j;
  }
  return radius;
}

void write_map_csv(std::ostream& out, const ConvergenceMap& map) {
  out << "s_hf,s_lf,converged,iterations,T,distance\n";
  for (const CellResult& c : map.cells) {
    out << format_double(c.s_hf) << ',' << format_double(c.s_lf) << ','
        << (c.converged ? 1 : 0) << ',' << c.iterations << ','
        << format_double(c.travel_time) << ',' << format_double(c.distance) << '\n';
  }
}

void write_transformed_csv(std::ostream& out, const ConvergenceMap& map) {
  out << "s_hf,s_lf,distance_error,angular_error,converged\n";
  for (const CellResult& c : map.cells) {
    const ErrorSizes e = error_transform(c.s_hf, c.s_lf, map.spec.k_hf, map.spec.k_lf);
    out << format_double(c.s_hf) << ',' << format_double(c.s_lf) << ','
        << format_double(e.distance) << ',' << format_double(e.angular) << ','
        << (c.converged ? 1 : 0) << '\n';
  }
}

void write_map_svg(std::ostream& out, const ConvergenceMap& map,
                   const std::vector<double>& iso_levels) {
  const SweepSpec& s = map.spec;
  const double size = 600.0;
  const double margin = 60.0;
  const double span_hf = s.hf_max - s.hf_min;
  const double span_lf = s.lf_max - s.lf_min;
  const double cell_w = size / s.hf_steps;
  const double cell_h = size / s.lf_steps;
  auto px = [&](double v) { return margin + (v - s.hf_min) / span_hf * size; };
  // SVG y grows downward; put lf_max at the top.
  auto py = [&](double v) { return margin + (s.lf_max - v) / span_lf * size; };

  const double w = size + 2 * margin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << w << "\" viewBox=\"0 0 " << w << ' ' << w << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << w << "\" fill=\"white\"/>\n";

  for (const CellResult& c : map.cells) {
    const char* fill = c.converged ? "#f2f2f2" : "#303060";
    out << "<rect x=\"" << px(c.s_hf) - 0.5 * cell_w << "\" y=\""
        << py(c.s_lf) - 0.5 * cell_h << "\" width=\"" << cell_w << "\" height=\""
        << cell_h << "\" fill=\"" << fill << "\"/>\n";
  }

  // Dashed diamonds |s_lf| + |s_hf| = level.
  for (double level : iso_levels) {
    out << "<polygon points=\"" << px(level) << ',' << py(0.0) << ' ' << px(0.0) << ','
        << py(level) << ' ' << px(-level) << ',' << py(0.0) << ' ' << px(0.0) << ','
        << py(-level)
        << "\" fill=\"none\" stroke=\"#d06020\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6,4\"/>\n";
  }

  // Frame and axis labels.
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size
      << "\" height=\"" << size << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << margin + 0.5 * size << "\" y=\"" << w - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
         "high-frequency deviation norm (signed)</text>\n";
  out << "<text x=\"15\" y=\"" << margin + 0.5 * size
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\" "
         "transform=\"rotate(-90 15 "
      << margin + 0.5 * size << ")\">low-frequency deviation norm (signed)</text>\n";
  for (double v : {s.hf_min, 0.0, s.hf_max}) {
    out << "<text x=\"" << px(v) << "\" y=\"" << margin + size + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_double(v) << "</text>\n";
  }
  for (double v : {s.lf_min, 0.0, s.lf_max}) {
    out << "<text x=\"" << margin - 8 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_double(v) << "</text>\n";
  }
  out << "</svg>\n";
}

} // namespace zermelo
