#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skyserve/coverage.hpp"
#include "skyserve/errors.hpp"
#include "skyserve/ga.hpp"
#include "skyserve/geometry.hpp"
#include "skyserve/link.hpp"
#include "skyserve/routing.hpp"

namespace skyserve {

using json = nlohmann::ordered_json;

struct SolverSettings {
  std::size_t heuristic_iterations = 200;
  std::size_t advanced_iterations = 200;
  GaConfig ga;
};

// Everything a planning run needs, loaded from one JSON document.
// The user roster and station live inside mission.
struct Scenario {
  std::string name;
  ObstacleMap map;
  LinkBudget budget;
  GridSpec grid;
  MissionSpec mission;
  SolverSettings solvers;
  std::optional<std::uint64_t> seed;  // optional default master seed
};

struct UserRecord {
  std::string id;
  double weight = 0.0;
  double arrival_s = 0.0;
  Point3 service_point;
  double ber_threshold = 0.0;
  bool ber_met = false;
  bool reintegrated = false;
};

// Result document for one solver run.  wall_time_s is runtime metadata shown
// on stdout only; it is deliberately never serialized so that reruns with the
// same seed produce byte-identical files.
struct TrajectoryReport {
  std::string scenario_name;
  std::string solver_name;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double wall_time_s = 0.0;
  double objective = 0.0;
  double end_time_s = 0.0;
  double t_max_s = 0.0;
  bool feasible = false;
  bool exact = true;
  std::vector<std::string> order;  // user ids in visit order
  std::vector<UserRecord> users;   // one record per user, roster order
  std::size_t compliant_pairs = 0;  // hard-priority pairs w_i > w_j served in
  std::size_t total_pairs = 0;      // the right relative order
};

namespace detail {

inline const json& require(const json& j, const char* key,
                           const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ValidationError(where + ": missing required field '" + key + "'");
  return *it;
}

inline double require_num(const json& j, const char* key,
                          const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number())
    throw ValidationError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline std::string require_str(const json& j, const char* key,
                               const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string())
    throw ValidationError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline json point_to_json(const Point3& p) {
  return json{{"x", p.x}, {"y", p.y}, {"z", p.z}};
}

inline Point3 point_from_json(const json& j, const std::string& where) {
  Point3 p{require_num(j, "x", where), require_num(j, "y", where),
           require_num(j, "z", where)};
  if (!is_finite(p)) throw ValidationError(where + ": coordinates not finite");
  return p;
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open '" + path.string() + "' for reading");
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("parse error in '" + path.string() +
                          "': " + e.what());
  }
  return j;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValidationError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ValidationError("write to '" + path.string() + "' failed");
}

}  // namespace detail

inline Scenario load_scenario(const std::filesystem::path& path) {
  const json j = detail::load_json_file(path);
  const std::string where = path.filename().string();

  if (detail::require(j, "version", where).get<int>() != 1)
    throw ValidationError(where + ": unsupported scenario version (want 1)");

  Scenario sc;
  sc.name = j.value("name", path.stem().string());
  if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();

  // --- map ---
  const json& jmap = detail::require(j, "map", where);
  std::vector<Cuboid> cuboids;
  for (const json& jc : detail::require(jmap, "obstacles", where + ".map")) {
    const std::string label =
        jc.contains("id") ? jc["id"].get<std::string>()
                          : "#" + std::to_string(cuboids.size());
    const std::string ctx = where + ".map.obstacles[" + label + "]";
    cuboids.push_back(Cuboid{detail::require_num(jc, "x_min", ctx),
                             detail::require_num(jc, "x_max", ctx),
                             detail::require_num(jc, "y_min", ctx),
                             detail::require_num(jc, "y_max", ctx),
                             detail::require_num(jc, "height", ctx), label});
  }
  if (jmap.contains("bounds")) {
    const json& jb = jmap["bounds"];
    const std::string ctx = where + ".map.bounds";
    sc.map = ObstacleMap(
        std::move(cuboids),
        Rect{detail::require_num(jb, "x_min", ctx),
             detail::require_num(jb, "x_max", ctx),
             detail::require_num(jb, "y_min", ctx),
             detail::require_num(jb, "y_max", ctx)});
  } else {
    sc.map = ObstacleMap(std::move(cuboids));
  }

  // --- link budget ---
  const json& jl = detail::require(j, "link", where);
  sc.budget.ber_loose = detail::require_num(jl, "ber_loose", where + ".link");
  sc.budget.ber_strict =
      detail::require_num(jl, "ber_strict", where + ".link");
  sc.budget.d_ref = detail::require_num(jl, "d_ref", where + ".link");
  if (!(sc.budget.ber_strict > 0.0 &&
        sc.budget.ber_strict < sc.budget.ber_loose &&
        sc.budget.ber_loose < 0.5))
    throw ValidationError(where +
                          ".link: need 0 < ber_strict < ber_loose < 0.5");
  if (!(sc.budget.d_ref > 0.0))
    throw ValidationError(where + ".link: d_ref must be > 0");

  // --- grid ---
  const json& jg = detail::require(j, "grid", where);
  sc.grid.x_min = detail::require_num(jg, "x_min", where + ".grid");
  sc.grid.x_max = detail::require_num(jg, "x_max", where + ".grid");
  sc.grid.y_min = detail::require_num(jg, "y_min", where + ".grid");
  sc.grid.y_max = detail::require_num(jg, "y_max", where + ".grid");
  sc.grid.dx = detail::require_num(jg, "dx", where + ".grid");
  sc.grid.dy = detail::require_num(jg, "dy", where + ".grid");
  sc.grid.altitude = detail::require_num(jg, "altitude", where + ".grid");
  if (!is_valid(sc.grid))
    throw ValidationError(
        where +
        ".grid: need x_min < x_max, y_min < y_max, dx/dy/altitude > 0");

  // --- mission ---
  const json& jm = detail::require(j, "mission", where);
  sc.mission.i_w = detail::require_num(jm, "i_w", where + ".mission");
  if (!(sc.mission.i_w >= 0.0))
    throw ValidationError(where + ".mission: i_w must be >= 0");
  sc.mission.v_uav = detail::require_num(jm, "v_uav", where + ".mission");
  if (!(sc.mission.v_uav > 0.0))
    throw ValidationError(where + ".mission: v_uav must be > 0");
  sc.budget.v_uav = sc.mission.v_uav;
  if (jm.contains("t_max_s")) {
    sc.mission.t_max = jm["t_max_s"].get<double>();
  } else if (jm.contains("e_max_j") && jm.contains("p_uav_w")) {
    const double e = jm["e_max_j"].get<double>();
    const double p = jm["p_uav_w"].get<double>();
    if (!(e > 0.0 && p > 0.0))
      throw ValidationError(where +
                            ".mission: e_max_j and p_uav_w must be > 0");
    sc.mission.t_max = e / p;
  } else {
    throw ValidationError(where +
                          ".mission: need t_max_s or (e_max_j, p_uav_w)");
  }
  if (!(sc.mission.t_max > 0.0))
    throw ValidationError(where + ".mission: t_max_s must be > 0");

  // --- station ---
  sc.mission.station = detail::point_from_json(
      detail::require(j, "station", where), where + ".station");
  for (const Cuboid& c : sc.map.cuboids())
    if (contains_point(c, sc.mission.station))
      throw ValidationError(where + ".station: strictly inside cuboid '" +
                            c.id + "'");
  if (sc.mission.station.z > sc.grid.altitude)
    throw ValidationError(where +
                          ".station: altitude above the grid altitude");

  // --- users ---
  const json& ju = detail::require(j, "users", where);
  if (!ju.is_array() || ju.empty())
    throw ValidationError(where + ".users: need a non-empty array");
  for (const json& u : ju) {
    const std::string ctx =
        where + ".users[" +
        (u.contains("id") ? u["id"].get<std::string>()
                          : std::to_string(sc.mission.users.size())) +
        "]";
    User user;
    user.id = detail::require_str(u, "id", ctx);
    if (user.id.empty()) throw ValidationError(ctx + ": empty id");
    user.position = detail::point_from_json(u, ctx);
    user.weight = detail::require_num(u, "weight", ctx);
    if (!(user.weight > 0.0 && user.weight <= 1.0))
      throw ValidationError(ctx + ": weight must lie in (0, 1]");
    for (const User& other : sc.mission.users)
      if (other.id == user.id)
        throw ValidationError(ctx + ": duplicate user id");
    for (const Cuboid& c : sc.map.cuboids())
      if (contains_point(c, user.position))
        throw ValidationError(ctx + ": position strictly inside cuboid '" +
                              c.id + "'");
    sc.mission.users.push_back(std::move(user));
  }

  // --- solver settings (optional, defaulted) ---
  if (j.contains("solvers")) {
    const json& js = j["solvers"];
    if (js.contains("heuristic"))
      sc.solvers.heuristic_iterations =
          js["heuristic"].value("iterations", sc.solvers.heuristic_iterations);
    if (js.contains("advanced"))
      sc.solvers.advanced_iterations =
          js["advanced"].value("iterations", sc.solvers.advanced_iterations);
    if (js.contains("ga")) {
      const json& jga = js["ga"];
      GaConfig& g = sc.solvers.ga;
      g.population = jga.value("population", g.population);
      g.generations = jga.value("generations", g.generations);
      g.crossover_rate = jga.value("crossover_rate", g.crossover_rate);
      g.mutation_rate = jga.value("mutation_rate", g.mutation_rate);
      g.lambda = jga.value("lambda", g.lambda);
      g.mu = jga.value("mu", g.mu);
      const std::string ctx = where + ".solvers.ga";
      if (g.population < 2)
        throw ValidationError(ctx + ": population must be >= 2");
      if (g.generations < 1)
        throw ValidationError(ctx + ": generations must be >= 1");
      if (g.crossover_rate < 0.0 || g.crossover_rate > 1.0 ||
          g.mutation_rate < 0.0 || g.mutation_rate > 1.0)
        throw ValidationError(ctx + ": rates must lie in [0, 1]");
      if (g.lambda < 0.0 || g.mu < 0.0)
        throw ValidationError(ctx + ": penalties must be >= 0");
    }
    if (sc.solvers.heuristic_iterations < 1 ||
        sc.solvers.advanced_iterations < 1)
      throw ValidationError(where + ".solvers: iterations must be >= 1");
  }

  return sc;
}

inline void save_scenario(const Scenario& sc,
                          const std::filesystem::path& path) {
  json j;
  j["version"] = 1;
  j["name"] = sc.name;
  if (sc.seed) j["seed"] = *sc.seed;
  json obstacles = json::array();
  for (const Cuboid& c : sc.map.cuboids())
    obstacles.push_back(json{{"id", c.id},
                             {"x_min", c.x_min},
                             {"x_max", c.x_max},
                             {"y_min", c.y_min},
                             {"y_max", c.y_max},
                             {"height", c.height}});
  j["map"] = json{{"bounds", json{{"x_min", sc.map.bounds().x_min},
                                  {"x_max", sc.map.bounds().x_max},
                                  {"y_min", sc.map.bounds().y_min},
                                  {"y_max", sc.map.bounds().y_max}}},
                  {"obstacles", std::move(obstacles)}};
  j["station"] = detail::point_to_json(sc.mission.station);
  json users = json::array();
  for (const User& u : sc.mission.users)
    users.push_back(json{{"id", u.id},
                         {"x", u.position.x},
                         {"y", u.position.y},
                         {"z", u.position.z},
                         {"weight", u.weight}});
  j["users"] = std::move(users);
  j["link"] = json{{"ber_loose", sc.budget.ber_loose},
                   {"ber_strict", sc.budget.ber_strict},
                   {"d_ref", sc.budget.d_ref}};
  j["grid"] = json{{"x_min", sc.grid.x_min}, {"x_max", sc.grid.x_max},
                   {"y_min", sc.grid.y_min}, {"y_max", sc.grid.y_max},
                   {"dx", sc.grid.dx},       {"dy", sc.grid.dy},
                   {"altitude", sc.grid.altitude}};
  j["mission"] = json{{"i_w", sc.mission.i_w},
                      {"t_max_s", sc.mission.t_max},
                      {"v_uav", sc.mission.v_uav}};
  j["solvers"] =
      json{{"heuristic", json{{"iterations", sc.solvers.heuristic_iterations}}},
           {"advanced", json{{"iterations", sc.solvers.advanced_iterations}}},
           {"ga", json{{"population", sc.solvers.ga.population},
                       {"generations", sc.solvers.ga.generations},
                       {"crossover_rate", sc.solvers.ga.crossover_rate},
                       {"mutation_rate", sc.solvers.ga.mutation_rate},
                       {"lambda", sc.solvers.ga.lambda},
                       {"mu", sc.solvers.ga.mu}}}};
  detail::write_text_file(path, j.dump(2) + "\n");
}

// Build the result document for a tour that serves the full roster.
inline TrajectoryReport make_report(const Tour& tour, const Scenario& sc,
                                    const std::string& solver_name,
                                    std::uint64_t seed,
                                    std::size_t iterations) {
  const std::vector<User>& users = sc.mission.users;
  if (tour.order.size() != users.size())
    throw ValidationError("make_report: tour does not serve every user");
  TrajectoryReport r;
  r.scenario_name = sc.name;
  r.solver_name = solver_name;
  r.seed = seed;
  r.iterations = iterations;
  r.objective = tour.objective;
  r.end_time_s = tour.end_time;
  r.t_max_s = sc.mission.t_max;
  r.feasible = tour.feasible;
  r.exact = tour.exact;
  for (const std::size_t i : tour.order) r.order.push_back(users[i].id);
  for (std::size_t i = 0; i < users.size(); ++i) {
    UserRecord rec;
    rec.id = users[i].id;
    rec.weight = users[i].weight;
    rec.arrival_s = tour.arrival_times[i];
    rec.service_point = tour.service_points[i];
    rec.ber_threshold = ber_threshold(users[i].weight, sc.budget);
    rec.ber_met = distance(rec.service_point, users[i].position) <=
                  max_service_distance(users[i].weight, sc.budget);
    rec.reintegrated =
        i < tour.reintegrated.size() && tour.reintegrated[i] != 0;
    r.users.push_back(std::move(rec));
  }
  for (std::size_t i = 0; i < users.size(); ++i)
    for (std::size_t k = 0; k < users.size(); ++k) {
      if (users[i].weight <= users[k].weight) continue;
      ++r.total_pairs;
      if (tour.arrival_times[i] < tour.arrival_times[k]) ++r.compliant_pairs;
    }
  return r;
}

inline void save_report(const TrajectoryReport& r,
                        const std::filesystem::path& path) {
  json j;
  j["version"] = 1;
  j["scenario"] = r.scenario_name;
  j["solver"] = json{{"name", r.solver_name},
                     {"seed", r.seed},
                     {"iterations", r.iterations}};
  j["objective"] = r.objective;
  j["end_time_s"] = r.end_time_s;
  j["t_max_s"] = r.t_max_s;
  j["feasible"] = r.feasible;
  j["exact"] = r.exact;
  j["order"] = r.order;
  json users = json::array();
  for (const UserRecord& u : r.users)
    users.push_back(json{{"id", u.id},
                         {"weight", u.weight},
                         {"arrival_s", u.arrival_s},
                         {"service_point", detail::point_to_json(u.service_point)},
                         {"ber_threshold", u.ber_threshold},
                         {"ber_met", u.ber_met},
                         {"reintegrated", u.reintegrated}});
  j["users"] = std::move(users);
  j["priority_compliance"] = json{{"compliant_pairs", r.compliant_pairs},
                                  {"total_pairs", r.total_pairs}};
  detail::write_text_file(path, j.dump(2) + "\n");
}

inline TrajectoryReport load_report(const std::filesystem::path& path) {
  const json j = detail::load_json_file(path);
  const std::string where = path.filename().string();
  if (detail::require(j, "version", where).get<int>() != 1)
    throw ValidationError(where + ": unsupported report version (want 1)");
  TrajectoryReport r;
  r.scenario_name = detail::require_str(j, "scenario", where);
  const json& js = detail::require(j, "solver", where);
  r.solver_name = detail::require_str(js, "name", where + ".solver");
  r.seed = detail::require(js, "seed", where + ".solver").get<std::uint64_t>();
  r.iterations =
      detail::require(js, "iterations", where + ".solver").get<std::size_t>();
  r.objective = detail::require_num(j, "objective", where);
  r.end_time_s = detail::require_num(j, "end_time_s", where);
  r.t_max_s = detail::require_num(j, "t_max_s", where);
  r.feasible = detail::require(j, "feasible", where).get<bool>();
  r.exact = detail::require(j, "exact", where).get<bool>();
  for (const json& o : detail::require(j, "order", where))
    r.order.push_back(o.get<std::string>());
  for (const json& u : detail::require(j, "users", where)) {
    const std::string ctx = where + ".users";
    UserRecord rec;
    rec.id = detail::require_str(u, "id", ctx);
    rec.weight = detail::require_num(u, "weight", ctx);
    rec.arrival_s = detail::require_num(u, "arrival_s", ctx);
    rec.service_point = detail::point_from_json(
        detail::require(u, "service_point", ctx), ctx + ".service_point");
    rec.ber_threshold = detail::require_num(u, "ber_threshold", ctx);
    rec.ber_met = detail::require(u, "ber_met", ctx).get<bool>();
    rec.reintegrated = detail::require(u, "reintegrated", ctx).get<bool>();
    r.users.push_back(std::move(rec));
  }
  const json& jp = detail::require(j, "priority_compliance", where);
  r.compliant_pairs = detail::require(jp, "compliant_pairs", where)
                          .get<std::size_t>();
  r.total_pairs = detail::require(jp, "total_pairs", where).get<std::size_t>();
  return r;
}

// Raw 0/1 raster, one CSV row per m_y value, one column per m_x value.
inline void export_grid(const ServiceAreaGrid& grid,
                        const std::filesystem::path& path) {
  std::ostringstream out;
  for (std::size_t my = 0; my < grid.m_y(); ++my) {
    for (std::size_t mx = 0; mx < grid.m_x(); ++mx) {
      if (mx) out << ',';
      out << static_cast<int>(grid.at(mx, my));
    }
    out << '\n';
  }
  detail::write_text_file(path, out.str());
}

// Trajectory plus markers as a GeoJSON feature collection (local meters
// frame, not lon/lat), for external plotting.
inline void export_tour_geojson(const Tour& tour, const Scenario& sc,
                                const std::filesystem::path& path) {
  const auto coord = [](const Point3& p) {
    return json::array({p.x, p.y, p.z});
  };
  json line = json::array();
  line.push_back(coord(sc.mission.station));
  for (const std::size_t i : tour.order)
    line.push_back(coord(tour.service_points[i]));
  line.push_back(coord(sc.mission.station));

  json features = json::array();
  features.push_back(
      json{{"type", "Feature"},
           {"properties", json{{"role", "trajectory"}}},
           {"geometry",
            json{{"type", "LineString"}, {"coordinates", std::move(line)}}}});
  features.push_back(
      json{{"type", "Feature"},
           {"properties", json{{"role", "station"}}},
           {"geometry", json{{"type", "Point"},
                             {"coordinates", coord(sc.mission.station)}}}});
  for (std::size_t i = 0; i < sc.mission.users.size(); ++i) {
    const User& u = sc.mission.users[i];
    features.push_back(json{
        {"type", "Feature"},
        {"properties", json{{"role", "user"},
                            {"id", u.id},
                            {"weight", u.weight},
                            {"arrival_s", tour.arrival_times[i]}}},
        {"geometry",
         json{{"type", "Point"}, {"coordinates", coord(u.position)}}}});
    features.push_back(json{
        {"type", "Feature"},
        {"properties", json{{"role", "service_point"}, {"user", u.id}}},
        {"geometry", json{{"type", "Point"},
                          {"coordinates", coord(tour.service_points[i])}}}});
  }
  const json doc{{"type", "FeatureCollection"},
                 {"features", std::move(features)}};
  detail::write_text_file(path, doc.dump(2) + "\n");
}

struct ConvertResult {
  ObstacleMap merged;
  std::size_t input_count = 0;
};

// Footprint table -> merged obstacle map.  CSV columns:
// x_min,y_min,x_max,y_max[,height]; a missing height falls back to
// default_height (which must then be > 0).  Rows are 1-indexed in
// diagnostics, counting the header.
inline ConvertResult convert_footprints(const std::filesystem::path& path,
                                        double default_height = 0.0) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open '" + path.string() + "' for reading");
  std::vector<Cuboid> cuboids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.find("x_min") != std::string::npos)
      continue;  // header
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 4 && fields.size() != 5)
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 4 or 5 comma-separated fields");
    const auto num = [&](const std::string& s, const char* what) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": bad " + what + " value '" + s + "'");
      }
    };
    Cuboid c;
    c.x_min = num(fields[0], "x_min");
    c.y_min = num(fields[1], "y_min");
    c.x_max = num(fields[2], "x_max");
    c.y_max = num(fields[3], "y_max");
    if (fields.size() == 5 && !fields[4].empty()) {
      c.height = num(fields[4], "height");
    } else {
      if (!(default_height > 0.0))
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": no height and no positive default given");
      c.height = default_height;
    }
    c.id = "fp" + std::to_string(line_no);
    if (!is_valid(c))
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": degenerate footprint");
    cuboids.push_back(std::move(c));
  }
  ConvertResult result;
  result.input_count = cuboids.size();
  result.merged = merge_cuboids(ObstacleMap(std::move(cuboids)), 0.0);
  return result;
}

}  // namespace skyserve
