#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "skyserve/errors.hpp"
#include "skyserve/routing.hpp"

// Brute-force reference implementations for the test suite.  Everything here
// recomputes distances, times, and objectives from scratch on purpose —
// these functions must not lean on the code they are checking.

namespace skyserve::oracle {

struct OracleConfig {
  double step = 0.05;              // sampling interval, meters
  std::size_t enumeration_cap = 8;  // max users for permutation enumeration
};

// LoS by dense sampling: walk the segment at intervals <= step and report
// blocked iff any sample lies inside a cuboid, with closed bounds (boundary
// contact counts as blocked).  Conservative only up to the step size: a
// sliver crossing shorter than the step can slip between samples.
inline bool los_by_sampling(const Point3& a, const Point3& b,
                            const ObstacleMap& map, double step) {
  if (!(step > 0.0))
    throw ValidationError("los_by_sampling: step must be > 0");
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
  const auto intervals =
      static_cast<std::size_t>(std::max(1.0, std::ceil(len / step)));
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double t =
        static_cast<double>(k) / static_cast<double>(intervals);
    const double x = a.x + t * dx;
    const double y = a.y + t * dy;
    const double z = a.z + t * dz;
    for (const Cuboid& c : map.cuboids()) {
      if (x >= c.x_min && x <= c.x_max && y >= c.y_min && y <= c.y_max &&
          z >= 0.0 && z <= c.height)
        return false;
    }
  }
  return true;
}

// Global optimum of the weighted-latency problem by checking every
// permutation in lexicographic order; ties keep the first (smallest) order.
inline Tour brute_force_order(const std::vector<Point3>& points,
                              const std::vector<User>& users,
                              const MissionSpec& spec,
                              std::size_t enumeration_cap = 8) {
  const std::size_t n = points.size();
  if (n != users.size())
    throw ValidationError("brute_force_order: points/users size mismatch");
  if (n > enumeration_cap)
    throw ValidationError("brute_force_order: instance exceeds the cap of " +
                          std::to_string(enumeration_cap));

  const auto leg = [&](const Point3& p, const Point3& q) {
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double dz = q.z - p.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz) / spec.v_uav;
  };

  Tour best;
  best.service_points = points;
  if (n == 0) {
    best.arrival_times.clear();
    best.end_time = 0.0;
    best.objective = 0.0;
    best.feasible = best.end_time <= spec.t_max;
    return best;
  }

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> times(n);
  do {
    double clock = 0.0;
    Point3 prev = spec.station;
    for (const std::size_t k : perm) {
      clock += leg(prev, points[k]);
      times[k] = clock;
      prev = points[k];
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      obj += std::pow(users[i].weight, spec.i_w) * times[i];
    if (obj < best_obj) {
      best_obj = obj;
      best.order = perm;
      best.arrival_times = times;
      best.end_time = clock + leg(prev, spec.station);
      best.objective = obj;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.feasible = best.end_time <= spec.t_max;
  best.reintegrated.assign(n, 0);
  return best;
}

}  // namespace skyserve::oracle
