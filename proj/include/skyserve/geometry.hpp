#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "skyserve/errors.hpp"

namespace skyserve {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3& a, const Point3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

inline bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline double distance(const Point3& a, const Point3& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline Point3 lerp(const Point3& a, const Point3& b, double t) {
  return {(1.0 - t) * a.x + t * b.x,
          (1.0 - t) * a.y + t * b.y,
          (1.0 - t) * a.z + t * b.z};
}

// Axis-aligned ground rectangle, used for city bounds and grid extents.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

// Axis-aligned building volume [x_min,x_max] x [y_min,y_max] x [0,height].
struct Cuboid {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double height = 0.0;
  std::string id;
};

inline bool is_valid(const Cuboid& c) {
  return std::isfinite(c.x_min) && std::isfinite(c.x_max) &&
         std::isfinite(c.y_min) && std::isfinite(c.y_max) &&
         std::isfinite(c.height) && c.x_min < c.x_max && c.y_min < c.y_max &&
         c.height > 0.0;
}

// Strict interior test: points on faces, edges, or the roof are not "inside".
// A user standing against a wall or a station on a roof is legal.
inline bool contains_point(const Cuboid& c, const Point3& p) {
  return p.x > c.x_min && p.x < c.x_max && p.y > c.y_min && p.y < c.y_max &&
         p.z > 0.0 && p.z < c.height;
}

// Does segment a-b cross the cuboid's lateral surface?  Each of the four
// vertical faces is a slab of a coordinate plane; the segment hits the plane
// x(b) = (1-b)*a + b*b at one parameter value, which blocks iff it lies in
// [0,1] and the hit point falls inside the closed face rectangle.  Grazing
// contact (hit exactly on an edge, or parameter exactly 0 or 1) counts as
// blocked.  A segment parallel to a face plane never intersects that face
// transversally; if it runs inside the plane it is handled by the two
// perpendicular faces or is a pure graze we accept as clear.
inline bool intersects_cuboid(const Point3& a, const Point3& b,
                              const Cuboid& c) {
  const double dy = b.y - a.y;
  if (dy != 0.0) {
    for (const double yf : {c.y_min, c.y_max}) {
      const double t = (yf - a.y) / dy;
      if (t < 0.0 || t > 1.0) continue;
      const double x = (1.0 - t) * a.x + t * b.x;
      const double z = (1.0 - t) * a.z + t * b.z;
      if (x >= c.x_min && x <= c.x_max && z >= 0.0 && z <= c.height)
        return true;
    }
  }
  const double dx = b.x - a.x;
  if (dx != 0.0) {
    for (const double xf : {c.x_min, c.x_max}) {
      const double t = (xf - a.x) / dx;
      if (t < 0.0 || t > 1.0) continue;
      const double y = (1.0 - t) * a.y + t * b.y;
      const double z = (1.0 - t) * a.z + t * b.z;
      if (y >= c.y_min && y <= c.y_max && z >= 0.0 && z <= c.height)
        return true;
    }
  }
  return false;
}

// Immutable set of building cuboids plus the ground rectangle they live in.
class ObstacleMap {
 public:
  ObstacleMap() = default;

  // Bounds default to the tight hull of the cuboids (zero rect if empty).
  explicit ObstacleMap(std::vector<Cuboid> cuboids)
      : ObstacleMap(std::move(cuboids), Rect{}, /*hull_bounds=*/true) {}

  ObstacleMap(std::vector<Cuboid> cuboids, const Rect& bounds)
      : ObstacleMap(std::move(cuboids), bounds, /*hull_bounds=*/false) {}

  const std::vector<Cuboid>& cuboids() const { return cuboids_; }
  const Rect& bounds() const { return bounds_; }
  std::size_t size() const { return cuboids_.size(); }

 private:
  ObstacleMap(std::vector<Cuboid> cuboids, const Rect& bounds,
              bool hull_bounds)
      : cuboids_(std::move(cuboids)), bounds_(bounds) {
    for (const Cuboid& c : cuboids_) {
      if (!is_valid(c))
        throw ValidationError("invalid cuboid '" + c.id +
                              "': need x_min < x_max, y_min < y_max, "
                              "height > 0, all finite");
    }
    if (hull_bounds) {
      if (!cuboids_.empty()) {
        bounds_ = {cuboids_[0].x_min, cuboids_[0].x_max, cuboids_[0].y_min,
                   cuboids_[0].y_max};
        for (const Cuboid& c : cuboids_) {
          bounds_.x_min = std::min(bounds_.x_min, c.x_min);
          bounds_.x_max = std::max(bounds_.x_max, c.x_max);
          bounds_.y_min = std::min(bounds_.y_min, c.y_min);
          bounds_.y_max = std::max(bounds_.y_max, c.y_max);
        }
      }
    } else {
      if (!(bounds_.x_min <= bounds_.x_max && bounds_.y_min <= bounds_.y_max))
        throw ValidationError("invalid map bounds");
      for (const Cuboid& c : cuboids_) {
        if (c.x_min < bounds_.x_min || c.x_max > bounds_.x_max ||
            c.y_min < bounds_.y_min || c.y_max > bounds_.y_max)
          throw ValidationError("cuboid '" + c.id +
                                "' extends outside the map bounds");
      }
    }
  }

  std::vector<Cuboid> cuboids_;
  Rect bounds_;
};

// True when the straight segment between uav and user clears every building.
inline bool check_los(const Point3& uav, const Point3& user,
                      const ObstacleMap& map) {
  for (const Cuboid& c : map.cuboids())
    if (intersects_cuboid(uav, user, c)) return false;
  return true;
}

namespace detail {

// One directional sweep: fuse runs of cuboids that share their full extent on
// the cross axis, abut exactly on the sweep axis, and whose heights differ by
// at most height_tol (the taller one wins).  Returns true if anything fused.
inline bool merge_sweep_x(std::vector<Cuboid>& cs, double height_tol) {
  std::sort(cs.begin(), cs.end(), [](const Cuboid& a, const Cuboid& b) {
    return std::tie(a.y_min, a.y_max, a.x_min, a.x_max, a.height, a.id) <
           std::tie(b.y_min, b.y_max, b.x_min, b.x_max, b.height, b.id);
  });
  std::vector<Cuboid> out;
  out.reserve(cs.size());
  bool changed = false;
  for (Cuboid& c : cs) {
    if (!out.empty()) {
      Cuboid& acc = out.back();
      if (acc.y_min == c.y_min && acc.y_max == c.y_max &&
          acc.x_max == c.x_min &&
          std::abs(acc.height - c.height) <= height_tol) {
        acc.x_max = c.x_max;
        acc.height = std::max(acc.height, c.height);
        changed = true;
        continue;
      }
    }
    out.push_back(std::move(c));
  }
  cs = std::move(out);
  return changed;
}

inline bool merge_sweep_y(std::vector<Cuboid>& cs, double height_tol) {
  std::sort(cs.begin(), cs.end(), [](const Cuboid& a, const Cuboid& b) {
    return std::tie(a.x_min, a.x_max, a.y_min, a.y_max, a.height, a.id) <
           std::tie(b.x_min, b.x_max, b.y_min, b.y_max, b.height, b.id);
  });
  std::vector<Cuboid> out;
  out.reserve(cs.size());
  bool changed = false;
  for (Cuboid& c : cs) {
    if (!out.empty()) {
      Cuboid& acc = out.back();
      if (acc.x_min == c.x_min && acc.x_max == c.x_max &&
          acc.y_max == c.y_min &&
          std::abs(acc.height - c.height) <= height_tol) {
        acc.y_max = c.y_max;
        acc.height = std::max(acc.height, c.height);
        changed = true;
        continue;
      }
    }
    out.push_back(std::move(c));
  }
  cs = std::move(out);
  return changed;
}

}  // namespace detail

// Fuse adjacent co-planar cuboids to cut the per-query obstacle count.
// Alternating x/y sweeps run to a joint fixpoint; a tiled block whose pieces
// share exact edges and (within height_tol) heights collapses back to one
// cuboid.  Heights are conservatively maxed, so merging never unblocks a
// previously blocked line of sight when height_tol is 0.
inline ObstacleMap merge_cuboids(const ObstacleMap& map,
                                 double height_tol = 0.0) {
  if (!(height_tol >= 0.0))
    throw ValidationError("merge_cuboids: height_tol must be >= 0");
  std::vector<Cuboid> cs = map.cuboids();
  bool changed = true;
  while (changed) {
    changed = detail::merge_sweep_x(cs, height_tol);
    changed = detail::merge_sweep_y(cs, height_tol) || changed;
  }
  return ObstacleMap(std::move(cs), map.bounds());
}

}  // namespace skyserve
