#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skyserve/errors.hpp"
#include "skyserve/link.hpp"

namespace skyserve {

// Lattice over the UAV's operating plane at a fixed altitude.  Cell (m_x,m_y)
// sits at the exact lattice point (x_min + m_x*dx, y_min + m_y*dy, altitude).
struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double dx = 10.0;
  double dy = 10.0;
  double altitude = 0.0;
};

inline bool is_valid(const GridSpec& g) {
  return std::isfinite(g.x_min) && std::isfinite(g.x_max) &&
         std::isfinite(g.y_min) && std::isfinite(g.y_max) &&
         std::isfinite(g.dx) && std::isfinite(g.dy) &&
         std::isfinite(g.altitude) && g.x_min < g.x_max && g.y_min < g.y_max &&
         g.dx > 0.0 && g.dy > 0.0 && g.altitude > 0.0;
}

struct GridDims {
  std::size_t m_x = 0;
  std::size_t m_y = 0;
};

// M = floor(extent / resolution) + 1 along each axis: the count of lattice
// points that fit in the closed range starting at the minimum.
inline GridDims grid_dimensions(const GridSpec& g) {
  return {static_cast<std::size_t>(std::floor((g.x_max - g.x_min) / g.dx)) + 1,
          static_cast<std::size_t>(std::floor((g.y_max - g.y_min) / g.dy)) +
              1};
}

inline Point3 cell_center(const GridSpec& g, std::size_t m_x,
                          std::size_t m_y) {
  const GridDims dims = grid_dimensions(g);
  if (m_x >= dims.m_x || m_y >= dims.m_y)
    throw std::out_of_range("cell_center: index (" + std::to_string(m_x) +
                            "," + std::to_string(m_y) + ") outside " +
                            std::to_string(dims.m_x) + "x" +
                            std::to_string(dims.m_y) + " grid");
  return {g.x_min + static_cast<double>(m_x) * g.dx,
          g.y_min + static_cast<double>(m_y) * g.dy, g.altitude};
}

// Binary service-area matrix s(m_x, m_y) for one user: 1 where the cell's
// lattice point is a valid service point.  Stored row-major with m_x as the
// outer index (flat = m_x * M_y + m_y); this layout is load-bearing for the
// serialized rasters.
class ServiceAreaGrid {
 public:
  ServiceAreaGrid(GridSpec spec, std::string user_id)
      : spec_(spec), user_id_(std::move(user_id)), dims_(grid_dimensions(spec)),
        cells_(dims_.m_x * dims_.m_y, 0) {}

  const GridSpec& spec() const { return spec_; }
  const std::string& user_id() const { return user_id_; }
  std::size_t m_x() const { return dims_.m_x; }
  std::size_t m_y() const { return dims_.m_y; }

  std::uint8_t at(std::size_t m_x, std::size_t m_y) const {
    return cells_[flat_index(m_x, m_y)];
  }
  void set(std::size_t m_x, std::size_t m_y, bool value) {
    cells_[flat_index(m_x, m_y)] = value ? 1 : 0;
  }

  std::size_t flat_index(std::size_t m_x, std::size_t m_y) const {
    if (m_x >= dims_.m_x || m_y >= dims_.m_y)
      throw std::out_of_range("ServiceAreaGrid: index out of range");
    return m_x * dims_.m_y + m_y;
  }

  Point3 center_of_flat(std::size_t flat) const {
    return cell_center(spec_, flat / dims_.m_y, flat % dims_.m_y);
  }

  const std::vector<std::uint8_t>& cells() const { return cells_; }

  std::size_t count_ones() const {
    std::size_t n = 0;
    for (const std::uint8_t c : cells_) n += c;
    return n;
  }

  // Flat indices of all 1-cells, ascending.
  std::vector<std::size_t> one_cells() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i]) out.push_back(i);
    return out;
  }

 private:
  GridSpec spec_;
  std::string user_id_;
  GridDims dims_;
  std::vector<std::uint8_t> cells_;
};

// Sweep every lattice point once with validate_service_point.  d_max is
// hoisted out of the loop; the overload taking it precomputed keeps the
// per-cell arithmetic identical to a cell-by-cell recomputation.
inline ServiceAreaGrid service_area(const User& user, const ObstacleMap& map,
                                    const LinkBudget& budget,
                                    const GridSpec& spec) {
  if (!is_valid(spec))
    throw ValidationError("service_area: invalid grid spec");
  ServiceAreaGrid grid(spec, user.id);
  const double d_max = max_service_distance(user.weight, budget);
  for (std::size_t mx = 0; mx < grid.m_x(); ++mx)
    for (std::size_t my = 0; my < grid.m_y(); ++my)
      grid.set(mx, my,
               validate_service_point(cell_center(spec, mx, my), user, map,
                                      d_max));
  return grid;
}

}  // namespace skyserve
