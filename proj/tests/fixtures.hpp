#pragma once

// Deterministic test cities and scenarios.  Everything here is pure function
// of hard-coded seeds: the generated JSON/CSV fixtures under data/ are
// committed, and make_fixtures regenerates them byte-identically.

#include <skyserve/skyserve.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

// 16x8 lots on an 80 m pitch (1280 x 640 m), one building per lot, inset at
// least 10 m from every lot line so the streets form a 20 m grid.  Sizes and
// heights are drawn from a fixed stream; lot 68 is forced to a 250 m tower so
// the 260 m operating altitude clears the skyline by exactly 10 m.
inline std::vector<skyserve::Cuboid> westbay_buildings() {
  std::vector<skyserve::Cuboid> out;
  for (int idx = 0; idx < 16 * 8; ++idx) {
    const int i = idx / 8;
    const int j = idx % 8;
    auto rng = skyserve::rng_stream(4242, "westbay", static_cast<std::uint64_t>(idx));
    double size = 30.0 + 10.0 * static_cast<double>(skyserve::uniform_index(rng, 4));
    double height = 20.0 + 10.0 * static_cast<double>(skyserve::uniform_index(rng, 24));
    if (idx == 68) {
      size = 60.0;
      height = 250.0;
    }
    const double inset = (80.0 - size) / 2.0;
    const double x0 = 80.0 * i + inset;
    const double y0 = 80.0 * j + inset;
    out.push_back(skyserve::Cuboid{x0, x0 + size, y0, y0 + size, height,
                                   "b" + std::to_string(idx)});
  }
  return out;
}

inline skyserve::ObstacleMap westbay_map() {
  return skyserve::ObstacleMap(westbay_buildings(),
                               skyserve::Rect{0.0, 1280.0, 0.0, 640.0});
}

// Users sit on street intersections, 5 m in from the lot corner on both axes
// and 1.5 m up; buildings never reach within 10 m of a lot line, so these
// positions are always on open street with a clear view straight up.
inline skyserve::User street_user(const std::string& id, int a, int b,
                                  double weight) {
  return skyserve::User{id, {80.0 * a + 5.0, 80.0 * b + 5.0, 1.5}, weight};
}

inline skyserve::Scenario westbay_base() {
  skyserve::Scenario sc;
  sc.map = westbay_map();
  sc.budget = skyserve::LinkBudget{};  // 1e-3 / 1e-6 / 500 m
  sc.grid = {0.0, 1280.0, 0.0, 640.0, 10.0, 10.0, 260.0};
  sc.mission.station = {2.5, 2.5, 20.0};
  sc.mission.v_uav = 5.0;
  sc.budget.v_uav = 5.0;
  sc.mission.t_max = 2100.0;
  sc.mission.i_w = 2.0;
  sc.seed = 4242;
  return sc;
}

// Twelve users in three priority bands: light near the station, heavy in the
// far corner.  Raising the priority exponent drags the tour out to the heavy
// cluster first, which is what the end-time trend tests look for.
inline skyserve::Scenario westbay_np12() {
  skyserve::Scenario sc = westbay_base();
  sc.name = "westbay_np12";
  auto& u = sc.mission.users;
  u.push_back(street_user("n0", 1, 1, 0.10));
  u.push_back(street_user("n1", 2, 1, 0.15));
  u.push_back(street_user("n2", 1, 2, 0.20));
  u.push_back(street_user("n3", 3, 0, 0.25));
  u.push_back(street_user("m0", 6, 3, 0.45));
  u.push_back(street_user("m1", 8, 2, 0.50));
  u.push_back(street_user("m2", 7, 5, 0.55));
  u.push_back(street_user("m3", 5, 4, 0.60));
  u.push_back(street_user("f0", 15, 5, 0.85));
  u.push_back(street_user("f1", 14, 6, 0.90));
  u.push_back(street_user("f2", 15, 7, 0.95));
  u.push_back(street_user("f3", 13, 7, 1.00));
  return sc;
}

// Ten users: a heavy cluster in the northeast plus light stragglers strung
// along the corridor toward it.  The stragglers' wide service discs overlap
// the corridor, so dropping and re-inserting them is nearly free — the
// layout the exclusion solver is built for.
inline skyserve::Scenario westbay_np10() {
  skyserve::Scenario sc = westbay_base();
  sc.name = "westbay_np10";
  auto& u = sc.mission.users;
  u.push_back(street_user("h0", 13, 6, 0.90));
  u.push_back(street_user("h1", 14, 7, 1.00));
  u.push_back(street_user("h2", 15, 6, 0.95));
  u.push_back(street_user("h3", 12, 7, 0.85));
  u.push_back(street_user("m0", 8, 4, 0.50));
  u.push_back(street_user("m1", 6, 2, 0.55));
  u.push_back(street_user("l0", 4, 2, 0.10));
  u.push_back(street_user("l1", 7, 3, 0.15));
  u.push_back(street_user("l2", 10, 5, 0.12));
  u.push_back(street_user("l3", 11, 4, 0.18));
  return sc;
}

// Compact 4x4-lot city for CLI and IO tests: low skyline, 100 m altitude,
// seven users including one just past the grid edge.
inline skyserve::Scenario smallcity_np7() {
  skyserve::Scenario sc;
  sc.name = "smallcity_np7";
  std::vector<skyserve::Cuboid> buildings;
  for (int idx = 0; idx < 16; ++idx) {
    const int i = idx / 4;
    const int j = idx % 4;
    auto rng = skyserve::rng_stream(99, "smallcity", static_cast<std::uint64_t>(idx));
    const double size =
        30.0 + 10.0 * static_cast<double>(skyserve::uniform_index(rng, 4));
    const double height =
        20.0 + 10.0 * static_cast<double>(skyserve::uniform_index(rng, 5));
    const double inset = (80.0 - size) / 2.0;
    const double x0 = 80.0 * i + inset;
    const double y0 = 80.0 * j + inset;
    buildings.push_back(skyserve::Cuboid{x0, x0 + size, y0, y0 + size, height,
                                         "b" + std::to_string(idx)});
  }
  sc.map = skyserve::ObstacleMap(std::move(buildings),
                                 skyserve::Rect{0.0, 320.0, 0.0, 320.0});
  sc.budget = skyserve::LinkBudget{};
  sc.grid = {0.0, 320.0, 0.0, 320.0, 10.0, 10.0, 100.0};
  sc.mission.station = {2.5, 2.5, 10.0};
  sc.mission.v_uav = 5.0;
  sc.budget.v_uav = 5.0;
  sc.mission.t_max = 2100.0;
  sc.mission.i_w = 2.0;
  sc.seed = 99;
  auto& u = sc.mission.users;
  u.push_back(street_user("u0", 1, 1, 0.90));
  u.push_back(street_user("u1", 2, 3, 0.30));
  u.push_back(street_user("u2", 3, 1, 0.50));
  u.push_back(street_user("u3", 0, 2, 0.20));
  u.push_back(street_user("u4", 2, 0, 1.00));
  u.push_back(street_user("u5", 4, 4, 0.70));
  u.push_back(street_user("u6", 3, 3, 0.40));
  return sc;
}

// Footprint table for the merge fixture: every westbay building emitted as a
// grid of abutting tiles (5x5 for the first 78 lots, 6x4 for the rest), rows
// shuffled.  78*25 + 50*24 = 3150 rows that merge back to the 128 originals.
// Tile boundaries are computed once per axis and printed with full precision,
// so abutment survives the round trip through text exactly.
inline void write_footprints_csv(const std::filesystem::path& path) {
  const std::vector<skyserve::Cuboid> base = westbay_buildings();
  std::vector<std::string> rows;
  char buf[256];
  for (std::size_t idx = 0; idx < base.size(); ++idx) {
    const skyserve::Cuboid& c = base[idx];
    const int nx = idx < 78 ? 5 : 6;
    const int ny = idx < 78 ? 5 : 4;
    std::vector<double> xs(nx + 1), ys(ny + 1);
    for (int k = 0; k <= nx; ++k)
      xs[k] = c.x_min + static_cast<double>(k) * ((c.x_max - c.x_min) / nx);
    for (int k = 0; k <= ny; ++k)
      ys[k] = c.y_min + static_cast<double>(k) * ((c.y_max - c.y_min) / ny);
    xs[nx] = c.x_max;  // pin the outer edges to the base rectangle
    ys[ny] = c.y_max;
    for (int a = 0; a < nx; ++a)
      for (int b = 0; b < ny; ++b) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g",
                      xs[a], ys[b], xs[a + 1], ys[b + 1], c.height);
        rows.emplace_back(buf);
      }
  }
  auto rng = skyserve::rng_stream(7, "footprints", 0);
  skyserve::shuffle_vec(rows, rng);
  std::string text = "x_min,y_min,x_max,y_max,height\n";
  for (const std::string& r : rows) {
    text += r;
    text += '\n';
  }
  skyserve::detail::write_text_file(path, text);
}

}  // namespace fixtures
