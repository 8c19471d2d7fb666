// Command-line front end: solve single routes, smooth them segment by
// segment, map the solver's recovery region over perturbed starts, and dump
// supporting data for plotting.
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "zermelo/config.hpp"
#include "zermelo/experiments.hpp"
#include "zermelo/schwarz.hpp"

namespace fs = std::filesystem;
using namespace zermelo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0; // 0: defer to the settings file
};

Config load_config(const GlobalArgs& args) {
  if (args.config_path.empty()) return Config{};
  return Config::parse_file(args.config_path, known_config_keys());
}

ProblemSpec problem_from(const Config& cfg) {
  ProblemSpec spec;
  spec.airspeed = cfg.get_double("airspeed", 1.0);
  spec.n = cfg.get_int("n", 512);
  const std::string field = cfg.get_string("field", "benchmark");
  if (field == "benchmark")
    spec.wind = benchmark_field(spec.airspeed);
  else if (field == "calm")
    spec.wind = WindField{};
  else
    throw invalid_config_error("unknown field '" + field + "' (use benchmark or calm)");
  spec.validate();
  return spec;
}

SolverOptions solver_from(const Config& cfg) {
  SolverOptions opts;
  opts.tolerance = cfg.get_double("tol", opts.tolerance);
  opts.max_iterations = cfg.get_int("max_iterations", opts.max_iterations);
  const std::string hess = cfg.get_string("hessian", "analytic");
  if (hess == "analytic")
    opts.hessian = HessianMode::Analytic;
  else if (hess == "fd" || hess == "finite-difference")
    opts.hessian = HessianMode::FiniteDifference;
  else
    throw invalid_config_error("unknown hessian '" + hess + "' (use analytic or fd)");
  return opts;
}

MultistartOptions multistart_from(const Config& cfg) {
  MultistartOptions opts;
  opts.solver = solver_from(cfg);
  opts.amplitudes = cfg.get_double_list("multistart_amplitudes", opts.amplitudes);
  return opts;
}

fs::path prepare_out_dir(const GlobalArgs& args) {
  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw invalid_config_error("cannot create output directory " + dir.string());
  return dir;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw invalid_config_error("cannot write " + path.string());
  body(out);
  if (!out) throw invalid_config_error("failed while writing " + path.string());
}

Trajectory load_start(const std::string& path, const ProblemSpec& spec) {
  if (path.empty())
    return straight_line(spec.origin, spec.destination, spec.n);
  std::ifstream in(path);
  if (!in) throw invalid_config_error("cannot read trajectory file " + path);
  Trajectory t = read_trajectory_csv(in);
  if (t.intervals() != spec.n)
    throw invalid_config_error("trajectory in " + path + " has " +
                               std::to_string(t.intervals()) +
                               " intervals, settings ask for " + std::to_string(spec.n));
  return t;
}

void print_report(const SolveReport& rep, const KKTState& state) {
  std::cout << "status: " << to_string(rep.status) << '\n'
            << "iterations: " << rep.iterations << '\n'
            << "residual: " << format_double(rep.residual_norm) << '\n'
            << "travel_time: " << format_double(rep.travel_time) << '\n'
            << "speed: " << format_double(state.speed) << '\n';
}

int run_solve(const GlobalArgs& args, const Config& cfg, const std::string& start_path) {
  const ProblemSpec spec = problem_from(cfg);
  const fs::path out = prepare_out_dir(args);

  KKTState state = initialize_state(load_start(start_path, spec));
  const SolveReport rep = newton_solve(spec, state, solver_from(cfg));

  write_file(out / "solution.csv",
             [&](std::ostream& o) { write_trajectory_csv(o, state.trajectory); });
  print_report(rep, state);
  std::cout << "solution: " << (out / "solution.csv").string() << '\n';
  return rep.status == SolveStatus::Converged ? kExitOk : kExitSolver;
}

int run_find_optimum(const GlobalArgs& args, const Config& cfg) {
  const ProblemSpec spec = problem_from(cfg);
  const fs::path out = prepare_out_dir(args);

  const auto ref = find_reference_optimum(spec, multistart_from(cfg));
  if (!ref) {
    std::cout << "status: no start converged\n";
    return kExitSolver;
  }
  write_file(out / "optimum.csv",
             [&](std::ostream& o) { write_trajectory_csv(o, ref->state.trajectory); });
  std::cout << "travel_time: " << format_double(ref->travel_time) << '\n'
            << "speed: " << format_double(ref->state.speed) << '\n'
            << "optimum: " << (out / "optimum.csv").string() << '\n';
  return kExitOk;
}

int run_smooth(const GlobalArgs& args, const Config& cfg, const std::string& input_path,
               int segments_flag, int passes_flag) {
  const ProblemSpec spec = problem_from(cfg);
  const fs::path out = prepare_out_dir(args);
  const SolverOptions solver = solver_from(cfg);
  const int segments = segments_flag > 0 ? segments_flag : cfg.get_int("segments", 11);
  const int passes = passes_flag > 0 ? passes_flag : cfg.get_int("passes", 2);
  if (segments < 1 || passes < 1)
    throw invalid_config_error("segments and passes must be positive");

  Trajectory t = load_start(input_path, spec);
  std::cout << "start travel_time: " << format_double(travel_time(spec, t)) << '\n';

  for (int pass = 1; pass <= passes; ++pass) {
    const bool shifted = (pass % 2 == 0);
    const SegmentPlan plan = make_plan(t, segments, shifted);
    int accepted = 0, rejected = 0;
    for (const Segment& seg : plan) {
      if (optimize_segment(spec, t, seg, solver))
        ++accepted;
      else
        ++rejected;
    }
    const std::string name = "pass_" + std::to_string(pass) + ".csv";
    write_file(out / name, [&](std::ostream& o) { write_trajectory_csv(o, t); });
    std::cout << "pass " << pass << (shifted ? " (shifted)" : " (aligned)")
              << ": travel_time " << format_double(travel_time(spec, t)) << ", accepted "
              << accepted << ", rejected " << rejected << ", wrote " << (out / name).string()
              << '\n';
  }
  return kExitOk;
}

int run_sweep_cmd(const GlobalArgs& args, const Config& cfg, bool smooth_first) {
  const ProblemSpec spec = problem_from(cfg);
  const fs::path out = prepare_out_dir(args);

  SweepSpec sweep;
  sweep.hf_min = cfg.get_double("hf_min", sweep.hf_min);
  sweep.hf_max = cfg.get_double("hf_max", sweep.hf_max);
  sweep.hf_steps = cfg.get_int("hf_steps", sweep.hf_steps);
  sweep.lf_min = cfg.get_double("lf_min", sweep.lf_min);
  sweep.lf_max = cfg.get_double("lf_max", sweep.lf_max);
  sweep.lf_steps = cfg.get_int("lf_steps", sweep.lf_steps);
  sweep.k_hf = cfg.get_int("k_hf", sweep.k_hf);
  sweep.k_lf = cfg.get_int("k_lf", sweep.k_lf);
  sweep.classify_eps = cfg.get_double("classify_eps", sweep.classify_eps);
  sweep.solver = solver_from(cfg);
  sweep.smooth_first = smooth_first;
  sweep.schwarz.segments = cfg.get_int("segments", sweep.schwarz.segments);
  sweep.schwarz.passes = cfg.get_int("passes", sweep.schwarz.passes);
  sweep.schwarz.solver = sweep.solver;
  sweep.threads = args.threads > 0 ? args.threads : cfg.get_int("threads", 1);

  const auto ref = find_reference_optimum(spec, multistart_from(cfg));
  if (!ref) {
    std::cout << "status: no reference optimum found\n";
    return kExitSolver;
  }
  std::cout << "reference travel_time: " << format_double(ref->travel_time) << '\n';

  const int total = sweep.hf_steps * sweep.lf_steps;
  const int stride = std::max(1, total / 20);
  const ConvergenceMap map =
      run_sweep(spec, *ref, sweep, [&](int done) {
        if (done % stride == 0 || done == total)
          std::cerr << "  " << done << '/' << total << " cells\r" << (done == total ? "\n" : "");
      });

  const std::vector<double> iso =
      cfg.get_double_list("iso_levels", {0.1, 0.3, 0.6});
  write_file(out / "map.csv", [&](std::ostream& o) { write_map_csv(o, map); });
  write_file(out / "map.svg", [&](std::ostream& o) { write_map_svg(o, map, iso); });

  int converged = 0;
  for (const CellResult& c : map.cells) converged += c.converged;
  std::cout << "converged cells: " << converged << '/' << total << '\n'
            << "empirical_radius: " << format_double(empirical_radius(map)) << '\n'
            << "map: " << (out / "map.csv").string() << '\n'
            << "picture: " << (out / "map.svg").string() << '\n';
  return kExitOk;
}

// Reads back a map CSV produced by the sweep subcommand.
ConvergenceMap read_map_csv(std::istream& in, int k_hf, int k_lf) {
  std::string line;
  if (!std::getline(in, line) || line != "s_hf,s_lf,converged,iterations,T,distance")
    throw invalid_config_error("input is not a sweep map (unexpected header)");

  ConvergenceMap map;
  map.spec.k_hf = k_hf;
  map.spec.k_lf = k_lf;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string fieldtext;
    std::vector<std::string> fields;
    while (std::getline(row, fieldtext, ',')) fields.push_back(fieldtext);
    if (fields.size() != 6)
      throw invalid_config_error("malformed map row: " + line);
    auto as_double = [&](const std::string& s) {
      double v = 0.0;
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw invalid_config_error("malformed number in map row: " + s);
      return v;
    };
    CellResult c;
    c.s_hf = as_double(fields[0]);
    c.s_lf = as_double(fields[1]);
    c.converged = fields[2] == "1";
    c.iterations = static_cast<int>(as_double(fields[3]));
    c.travel_time = as_double(fields[4]);
    c.distance = as_double(fields[5]);
    map.cells.push_back(c);
  }
  return map;
}

int run_transform(const GlobalArgs& args, const Config& cfg, const std::string& input_path) {
  const fs::path out = prepare_out_dir(args);
  const std::string path = input_path.empty() ? (fs::path(args.out_dir) / "map.csv").string()
                                              : input_path;
  std::ifstream in(path);
  if (!in) throw invalid_config_error("cannot read map file " + path);
  const ConvergenceMap map =
      read_map_csv(in, cfg.get_int("k_hf", 30), cfg.get_int("k_lf", 1));

  write_file(out / "transformed.csv",
             [&](std::ostream& o) { write_transformed_csv(o, map); });
  std::cout << "rows: " << map.cells.size() << '\n'
            << "transformed: " << (out / "transformed.csv").string() << '\n';
  return kExitOk;
}

int run_dump_wind(const GlobalArgs& args, const Config& cfg, int nx, int ny) {
  ProblemSpec spec;
  spec.airspeed = cfg.get_double("airspeed", 1.0);
  const std::string field = cfg.get_string("field", "benchmark");
  if (field == "benchmark")
    spec.wind = benchmark_field(spec.airspeed);
  else if (field == "calm")
    spec.wind = WindField{};
  else
    throw invalid_config_error("unknown field '" + field + "' (use benchmark or calm)");
  if (nx < 2 || ny < 2) throw invalid_config_error("need at least 2 samples per axis");

  const fs::path out = prepare_out_dir(args);
  write_file(out / "wind.csv", [&](std::ostream& o) {
    o << "x,y,wx,wy\n";
    for (int j = 0; j < ny; ++j) {
      const double y = -0.35 + 0.7 * j / (ny - 1);
      for (int i = 0; i < nx; ++i) {
        const double x = static_cast<double>(i) / (nx - 1);
        const Vec2 w = spec.wind.velocity(Vec2(x, y));
        o << format_double(x) << ',' << format_double(y) << ',' << format_double(w.x())
          << ',' << format_double(w.y()) << '\n';
      }
    }
  });
  std::cout << "samples: " << nx * ny << '\n'
            << "wind: " << (out / "wind.csv").string() << '\n';
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  GlobalArgs args;
  CLI::App app{"Free-flight route optimization over vortex wind fields"};
  app.require_subcommand(1);
  app.fallthrough(); // allow the global options after the subcommand too
  app.add_option("--config", args.config_path, "settings file (key=value lines)");
  app.add_option("--out", args.out_dir, "output directory (created if missing)");
  app.add_option("--threads", args.threads, "worker threads for sweeps");

  std::string start_path, smooth_input, map_input;
  int segments_flag = 0, passes_flag = 0, nx = 201, ny = 101;
  bool smooth_first = false;

  CLI::App* solve = app.add_subcommand("solve", "run the route solver once");
  solve->add_option("--start", start_path, "starting trajectory CSV (default: straight chord)");

  CLI::App* find_opt =
      app.add_subcommand("find-optimum", "multi-start search for the best route");

  CLI::App* smooth = app.add_subcommand("smooth", "segment-wise smoothing passes");
  smooth->add_option("--input", smooth_input, "trajectory CSV to smooth (default: straight chord)");
  smooth->add_option("--segments", segments_flag, "segments per pass");
  smooth->add_option("--passes", passes_flag, "number of passes");

  CLI::App* sweep = app.add_subcommand("sweep", "map convergence over perturbed starts");
  sweep->add_flag("--smooth", smooth_first, "smooth each start before solving");

  CLI::App* transform =
      app.add_subcommand("transform", "convert a sweep map to error sizes");
  transform->add_option("--input", map_input, "map CSV (default: <out>/map.csv)");

  CLI::App* dump = app.add_subcommand("dump-wind", "sample the wind field to CSV");
  dump->add_option("--nx", nx, "samples across");
  dump->add_option("--ny", ny, "samples down");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Config cfg = load_config(args);
    if (app.got_subcommand(solve)) return run_solve(args, cfg, start_path);
    if (app.got_subcommand(find_opt)) return run_find_optimum(args, cfg);
    if (app.got_subcommand(smooth))
      return run_smooth(args, cfg, smooth_input, segments_flag, passes_flag);
    if (app.got_subcommand(sweep)) return run_sweep_cmd(args, cfg, smooth_first);
    if (app.got_subcommand(transform)) return run_transform(args, cfg, map_input);
    if (app.got_subcommand(dump)) return run_dump_wind(args, cfg, nx, ny);
  } catch (const invalid_config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
