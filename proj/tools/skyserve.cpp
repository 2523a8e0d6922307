// skyserve — UAV service-trajectory planning CLI.
//
// Subcommands: validate, coverage, solve, compare, convert.
// Exit codes: 0 success, 1 validation or usage error, 2 infeasible mission.
// All randomness flows from --seed (or the scenario's "seed" field), so any
// command writes byte-identical files when rerun with the same inputs.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skyserve/skyserve.hpp"

namespace fs = std::filesystem;
using namespace skyserve;

namespace {

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<double> grid_res;
  std::optional<double> iw_override;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
};

Scenario load_and_override(const CommonOpts& opt) {
  Scenario sc = load_scenario(opt.scenario_path);
  if (opt.grid_res) {
    if (!(*opt.grid_res > 0.0))
      throw ValidationError("--grid-res must be > 0");
    sc.grid.dx = *opt.grid_res;
    sc.grid.dy = *opt.grid_res;
  }
  if (opt.iw_override) {
    if (!(*opt.iw_override >= 0.0))
      throw ValidationError("--iw must be >= 0");
    sc.mission.i_w = *opt.iw_override;
  }
  return sc;
}

std::uint64_t pick_seed(const CommonOpts& opt, const Scenario& sc) {
  if (opt.seed) return *opt.seed;
  if (sc.seed) return *sc.seed;
  throw ValidationError(
      "no seed: pass --seed or put a \"seed\" field in the scenario");
}

std::vector<ServiceAreaGrid> all_areas(const Scenario& sc) {
  std::vector<ServiceAreaGrid> areas;
  areas.reserve(sc.mission.users.size());
  for (const User& u : sc.mission.users)
    areas.push_back(service_area(u, sc.map, sc.budget, sc.grid));
  return areas;
}

struct TimedTour {
  Tour tour;
  double wall_s = 0.0;
  std::size_t iterations = 0;
};

TimedTour run_solver(const std::string& name, const Scenario& sc,
                     const std::vector<ServiceAreaGrid>& areas,
                     std::uint64_t seed,
                     std::optional<std::size_t> iterations) {
  TimedTour out;
  const auto t0 = std::chrono::steady_clock::now();
  if (name == "heuristic") {
    out.iterations = iterations.value_or(sc.solvers.heuristic_iterations);
    out.tour = heuristic_solve(areas, sc.mission, out.iterations, seed);
  } else if (name == "advanced") {
    out.iterations = iterations.value_or(sc.solvers.advanced_iterations);
    out.tour = advanced_solve(areas, sc.mission, sc.map, sc.budget,
                              out.iterations, seed);
  } else if (name == "ga") {
    GaConfig cfg = sc.solvers.ga;
    cfg.seed = seed;
    if (iterations) cfg.generations = *iterations;
    out.iterations = cfg.generations;
    out.tour = ga_solve(areas, sc.mission, cfg);
  } else {
    throw ValidationError("unknown solver '" + name +
                          "' (want ga, heuristic, or advanced)");
  }
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
                   .count();
  return out;
}

void write_solver_outputs(const Scenario& sc, const std::string& solver,
                          const TimedTour& run, std::uint64_t seed,
                          const fs::path& out_dir) {
  TrajectoryReport report =
      make_report(run.tour, sc, solver, seed, run.iterations);
  report.wall_time_s = run.wall_s;
  fs::create_directories(out_dir);
  save_report(report, out_dir / ("report_" + solver + ".json"));
  export_tour_geojson(run.tour, sc, out_dir / ("trajectory_" + solver +
                                               ".geojson"));
  std::cout << solver << ": objective " << report.objective << ", end time "
            << report.end_time_s << " s"
            << (report.feasible ? "" : " (INFEASIBLE)") << ", priority pairs "
            << report.compliant_pairs << "/" << report.total_pairs
            << ", wall " << run.wall_s << " s\n";
}

int cmd_validate(const CommonOpts& opt) {
  const Scenario sc = load_and_override(opt);
  const GridDims dims = grid_dimensions(sc.grid);
  std::cout << "scenario '" << sc.name << "' OK\n"
            << "  obstacles: " << sc.map.size() << " (bounds x ["
            << sc.map.bounds().x_min << ", " << sc.map.bounds().x_max
            << "], y [" << sc.map.bounds().y_min << ", "
            << sc.map.bounds().y_max << "])\n"
            << "  users: " << sc.mission.users.size() << "\n"
            << "  grid: " << dims.m_x << " x " << dims.m_y << " cells at dx="
            << sc.grid.dx << ", dy=" << sc.grid.dy << ", altitude "
            << sc.grid.altitude << " m\n"
            << "  mission: i_w " << sc.mission.i_w << ", T_max "
            << sc.mission.t_max << " s, v " << sc.mission.v_uav << " m/s\n";
  return 0;
}

int cmd_coverage(const CommonOpts& opt) {
  const Scenario sc = load_and_override(opt);
  fs::create_directories(opt.out_dir);
  for (const User& u : sc.mission.users) {
    const ServiceAreaGrid grid = service_area(u, sc.map, sc.budget, sc.grid);
    const fs::path path =
        fs::path(opt.out_dir) / ("coverage_" + u.id + ".csv");
    export_grid(grid, path);
    std::cout << u.id << ": " << grid.count_ones() << " / "
              << grid.cells().size() << " valid cells -> " << path.string()
              << "\n";
  }
  return 0;
}

int cmd_solve(const CommonOpts& opt, const std::string& solver) {
  const Scenario sc = load_and_override(opt);
  const std::uint64_t seed = pick_seed(opt, sc);
  const TimedTour run =
      run_solver(solver, sc, all_areas(sc), seed, opt.iterations);
  write_solver_outputs(sc, solver, run, seed, opt.out_dir);
  return 0;
}

int cmd_compare(const CommonOpts& opt) {
  const Scenario sc = load_and_override(opt);
  const std::uint64_t seed = pick_seed(opt, sc);
  const std::vector<ServiceAreaGrid> areas = all_areas(sc);
  fs::create_directories(opt.out_dir);
  std::ostringstream csv;
  csv << "solver,objective,end_time_s,feasible,exact,compliant_pairs,"
         "total_pairs\n";
  for (const std::string solver : {"advanced", "heuristic", "ga"}) {
    const TimedTour run = run_solver(solver, sc, areas, seed, opt.iterations);
    TrajectoryReport report =
        make_report(run.tour, sc, solver, seed, run.iterations);
    report.wall_time_s = run.wall_s;
    save_report(report, fs::path(opt.out_dir) / ("report_" + solver +
                                                 ".json"));
    csv << solver << ',' << report.objective << ',' << report.end_time_s
        << ',' << (report.feasible ? 1 : 0) << ',' << (report.exact ? 1 : 0)
        << ',' << report.compliant_pairs << ',' << report.total_pairs << '\n';
    std::cout << solver << ": objective " << report.objective << ", end time "
              << report.end_time_s << " s, wall " << run.wall_s << " s\n";
  }
  const fs::path table = fs::path(opt.out_dir) / "compare.csv";
  std::ofstream out(table, std::ios::binary);
  if (!out)
    throw ValidationError("cannot open '" + table.string() + "' for writing");
  out << csv.str();
  std::cout << "table -> " << table.string() << "\n";
  return 0;
}

int cmd_convert(const std::string& footprints, double default_height,
                const std::string& out_dir) {
  const ConvertResult result = convert_footprints(footprints, default_height);
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / "obstacles.json";
  json j;
  j["version"] = 1;
  json obstacles = json::array();
  for (const Cuboid& c : result.merged.cuboids())
    obstacles.push_back(json{{"id", c.id},
                             {"x_min", c.x_min},
                             {"x_max", c.x_max},
                             {"y_min", c.y_min},
                             {"y_max", c.y_max},
                             {"height", c.height}});
  j["obstacles"] = std::move(obstacles);
  detail::write_text_file(path, j.dump(2) + "\n");
  std::cout << "footprints: " << result.input_count << " -> merged cuboids: "
            << result.merged.size() << " -> " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV service-trajectory planner"};
  app.require_subcommand(1);

  CommonOpts opt;
  double grid_res = 0.0, iw = 0.0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::string solver = "advanced";
  std::string footprints;
  double default_height = 0.0;

  const auto add_common = [&](CLI::App* cmd, bool takes_seed) {
    cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file")
        ->required();
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--grid-res", grid_res,
                    "override grid resolution (sets dx = dy)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--iw", iw, "override the mission's I_w exponent");
    if (takes_seed) {
      cmd->add_option("--seed", seed, "master RNG seed");
      cmd->add_option("--iterations", iterations,
                      "solver iteration budget (GA: generations)");
    }
  };

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  add_common(validate, false);
  CLI::App* coverage =
      app.add_subcommand("coverage", "write per-user service-area rasters");
  add_common(coverage, false);
  CLI::App* solve = app.add_subcommand("solve", "run one solver");
  add_common(solve, true);
  solve->add_option("--solver", solver, "ga | heuristic | advanced");
  CLI::App* compare =
      app.add_subcommand("compare", "run all solvers on one scenario");
  add_common(compare, true);
  CLI::App* convert =
      app.add_subcommand("convert", "footprint CSV -> merged obstacle JSON");
  convert->add_option("--footprints", footprints, "footprint CSV file")
      ->required();
  convert->add_option("--default-height", default_height,
                      "height for rows that omit one");
  convert->add_option("--out-dir", opt.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage errors share the validation exit code
  }

  try {
    for (CLI::App* cmd : {solve, compare}) {
      if (cmd->parsed()) {
        if (cmd->count("--seed")) opt.seed = seed;
        if (cmd->count("--iterations")) opt.iterations = iterations;
      }
    }
    for (CLI::App* cmd : {validate, coverage, solve, compare}) {
      if (cmd->parsed()) {
        if (cmd->count("--grid-res")) opt.grid_res = grid_res;
        if (cmd->count("--iw")) opt.iw_override = iw;
      }
    }
    if (validate->parsed()) return cmd_validate(opt);
    if (coverage->parsed()) return cmd_coverage(opt);
    if (solve->parsed()) return cmd_solve(opt, solver);
    if (compare->parsed()) return cmd_compare(opt);
    if (convert->parsed())
      return cmd_convert(footprints, default_height, opt.out_dir);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
