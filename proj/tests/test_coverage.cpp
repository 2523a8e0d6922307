#include <catch2/catch_amalgamated.hpp>

#include <skyserve/coverage.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

using namespace skyserve;

namespace {
GridSpec square_grid(double extent, double res, double altitude) {
  return {0.0, extent, 0.0, extent, res, res, altitude};
}
}  // namespace

TEST_CASE("grid_dimensions counts lattice points per axis", "[coverage]") {
  CHECK(grid_dimensions(square_grid(100.0, 10.0, 260.0)).m_x == 11);
  CHECK(grid_dimensions(square_grid(100.0, 10.0, 260.0)).m_y == 11);
  // A 95 m extent at 10 m steps keeps only the points that fit.
  const GridSpec uneven{0.0, 95.0, 0.0, 100.0, 10.0, 10.0, 260.0};
  CHECK(grid_dimensions(uneven).m_x == 10);
  CHECK(grid_dimensions(uneven).m_y == 11);
  // Extent smaller than the step still yields the origin point.
  CHECK(grid_dimensions(square_grid(9.0, 10.0, 260.0)).m_x == 1);
  // Non-integer ratio: floor(100/7.5) + 1 = 14.
  CHECK(grid_dimensions(square_grid(100.0, 7.5, 260.0)).m_x == 14);
}

TEST_CASE("cell_center returns exact lattice points", "[coverage]") {
  const GridSpec g = square_grid(100.0, 10.0, 260.0);
  const Point3 p = cell_center(g, 3, 2);
  CHECK(p.x == 30.0);
  CHECK(p.y == 20.0);
  CHECK(p.z == 260.0);

  // The formula is literal: x_min + m_x*dx, no accumulation drift.
  const GridSpec off{-35.0, 100.0, 12.5, 200.0, 7.5, 2.5, 80.0};
  const GridDims dims = grid_dimensions(off);
  for (std::size_t mx = 0; mx < dims.m_x; mx += 3)
    for (std::size_t my = 0; my < dims.m_y; my += 7) {
      const Point3 c = cell_center(off, mx, my);
      CHECK(c.x == off.x_min + static_cast<double>(mx) * off.dx);
      CHECK(c.y == off.y_min + static_cast<double>(my) * off.dy);
      CHECK(c.z == off.altitude);
    }

  CHECK_THROWS_AS(cell_center(g, 11, 0), std::out_of_range);
  CHECK_THROWS_AS(cell_center(g, 0, 11), std::out_of_range);
}

TEST_CASE("ServiceAreaGrid indexing is row-major with m_x outer", "[coverage]") {
  ServiceAreaGrid grid(square_grid(100.0, 10.0, 260.0), "u3");
  REQUIRE(grid.m_x() == 11);
  REQUIRE(grid.m_y() == 11);
  REQUIRE(grid.cells().size() == 121);
  CHECK(grid.user_id() == "u3");

  CHECK(grid.flat_index(0, 0) == 0);
  CHECK(grid.flat_index(0, 10) == 10);
  CHECK(grid.flat_index(1, 0) == 11);
  CHECK(grid.flat_index(3, 2) == 35);
  CHECK_THROWS_AS(grid.flat_index(11, 0), std::out_of_range);

  grid.set(3, 2, true);
  grid.set(7, 9, true);
  CHECK(grid.at(3, 2) == 1);
  CHECK(grid.at(3, 3) == 0);
  CHECK(grid.cells()[35] == 1);
  CHECK(grid.count_ones() == 2);
  CHECK(grid.one_cells() == std::vector<std::size_t>{35, 86});

  const Point3 c = grid.center_of_flat(35);
  CHECK(c.x == 30.0);
  CHECK(c.y == 20.0);

  grid.set(3, 2, false);
  CHECK(grid.count_ones() == 1);
}

TEST_CASE("service_area covers everything for a close unobstructed user", "[coverage]") {
  const ObstacleMap empty{std::vector<Cuboid>{},
                          Rect{-100.0, 200.0, -100.0, 200.0}};
  const LinkBudget budget;
  const User user{"u0", {50.0, 50.0, 1.5}, 1.0};
  // Farthest lattice point is ~121 m away, well inside the 325 m radius.
  const ServiceAreaGrid area =
      service_area(user, empty, budget, square_grid(100.0, 10.0, 100.0));
  CHECK(area.count_ones() == 121);
}

TEST_CASE("service_area is empty when the grid plane is out of range", "[coverage]") {
  const ObstacleMap empty{std::vector<Cuboid>{},
                          Rect{-100.0, 200.0, -100.0, 200.0}};
  const LinkBudget budget;
  const User user{"u0", {50.0, 50.0, 1.5}, 1.0};
  // Nearest lattice point is 398.5 m overhead; the weight-1 radius is ~325 m.
  const ServiceAreaGrid area =
      service_area(user, empty, budget, square_grid(100.0, 10.0, 400.0));
  CHECK(area.count_ones() == 0);
}

TEST_CASE("a building casts a shadow in the service area", "[coverage]") {
  const ObstacleMap map{
      std::vector<Cuboid>{{20.0, 30.0, 40.0, 60.0, 200.0, "slab"}},
      Rect{-100.0, 200.0, -100.0, 200.0}};
  const LinkBudget budget;
  const User user{"u0", {5.0, 50.0, 1.5}, 1.0};
  const ServiceAreaGrid area =
      service_area(user, map, budget, square_grid(100.0, 10.0, 100.0));

  CHECK(area.at(0, 5) == 1);   // (0,50,100): same side as the user
  CHECK(area.at(5, 5) == 0);   // (50,50,100): dead behind the slab
  CHECK(area.at(10, 5) == 0);  // (100,50,100): ditto, farther out
  CHECK(area.at(5, 0) == 1);   // (50,0,100): sight line passes south of it
  CHECK(area.count_ones() > 0);
  CHECK(area.count_ones() < 121);
}

TEST_CASE("service_area equals a cell-by-cell recomputation bit for bit", "[coverage]") {
  const ObstacleMap map{
      std::vector<Cuboid>{{20.0, 30.0, 40.0, 60.0, 200.0, "slab"},
                          {60.0, 80.0, 10.0, 25.0, 90.0, "annex"}},
      Rect{-100.0, 200.0, -100.0, 200.0}};
  const LinkBudget budget;
  const User user{"u0", {5.0, 50.0, 1.5}, 0.7};
  const GridSpec spec = square_grid(100.0, 10.0, 120.0);

  const ServiceAreaGrid area = service_area(user, map, budget, spec);
  const ServiceAreaGrid again = service_area(user, map, budget, spec);
  CHECK(area.cells() == again.cells());

  const double d_max = max_service_distance(user.weight, budget);
  const GridDims dims = grid_dimensions(spec);
  for (std::size_t mx = 0; mx < dims.m_x; ++mx)
    for (std::size_t my = 0; my < dims.m_y; ++my) {
      const bool expect =
          validate_service_point(cell_center(spec, mx, my), user, map, d_max);
      CHECK(area.at(mx, my) == (expect ? 1 : 0));
    }

  // Every marked cell really is inside the range disc.
  for (const std::size_t flat : area.one_cells())
    CHECK(distance(area.center_of_flat(flat), user.position) <= d_max);
}

TEST_CASE("refining the grid preserves values at shared lattice points", "[coverage]") {
  const ObstacleMap map{
      std::vector<Cuboid>{{20.0, 30.0, 40.0, 60.0, 200.0, "slab"}},
      Rect{-100.0, 200.0, -100.0, 200.0}};
  const LinkBudget budget;
  const User user{"u0", {5.0, 50.0, 1.5}, 1.0};

  const ServiceAreaGrid coarse =
      service_area(user, map, budget, square_grid(100.0, 10.0, 100.0));
  const ServiceAreaGrid fine =
      service_area(user, map, budget, square_grid(100.0, 5.0, 100.0));
  REQUIRE(fine.m_x() == 21);
  for (std::size_t mx = 0; mx < coarse.m_x(); ++mx)
    for (std::size_t my = 0; my < coarse.m_y(); ++my)
      CHECK(coarse.at(mx, my) == fine.at(2 * mx, 2 * my));
}

TEST_CASE("service_area rejects malformed grid specs", "[coverage]") {
  const ObstacleMap empty{std::vector<Cuboid>{},
                          Rect{-100.0, 200.0, -100.0, 200.0}};
  const LinkBudget budget;
  const User user{"u0", {50.0, 50.0, 1.5}, 1.0};
  CHECK_THROWS_AS(
      service_area(user, empty, budget, {100.0, 0.0, 0.0, 100.0, 10.0, 10.0, 100.0}),
      ValidationError);
  CHECK_THROWS_AS(
      service_area(user, empty, budget, {0.0, 100.0, 0.0, 100.0, 0.0, 10.0, 100.0}),
      ValidationError);
  CHECK_THROWS_AS(
      service_area(user, empty, budget, {0.0, 100.0, 0.0, 100.0, 10.0, 10.0, 0.0}),
      ValidationError);
}
