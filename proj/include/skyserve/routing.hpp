#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "skyserve/coverage.hpp"
#include "skyserve/errors.hpp"
#include "skyserve/link.hpp"
#include "skyserve/rng.hpp"

namespace skyserve {

struct MissionSpec {
  Point3 station;
  std::vector<User> users;
  double i_w = 0.0;    // priority exponent in the weighted-latency objective
  double t_max = 0.0;  // mission deadline incl. the return leg, seconds
  double v_uav = 5.0;  // cruise speed, m/s
};

// A service trajectory: visit `order` (indices into the user array the tour
// was built against), one service point per user, chained arrival times.
// Unserved users carry NaN arrival times; solvers only ever return tours that
// serve everyone.  `exact` is false when the order came from local search
// rather than the exact subset DP.
struct Tour {
  std::vector<std::size_t> order;
  std::vector<Point3> service_points;
  std::vector<double> arrival_times;
  std::vector<std::uint8_t> reintegrated;
  double end_time = 0.0;
  double objective = 0.0;
  bool feasible = false;
  bool exact = true;
};

inline double travel_time(const Point3& a, const Point3& b, double v) {
  return distance(a, b) / v;
}

// Weighted latency: sum of w_i^I_w * t_i over the served users, accumulated
// in ascending user index so independent recomputations agree bit-for-bit.
inline double objective_value(const Tour& tour, const std::vector<User>& users,
                              double i_w) {
  std::vector<std::uint8_t> served(users.size(), 0);
  for (const std::size_t i : tour.order) served[i] = 1;
  double total = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i)
    if (served[i])
      total += std::pow(users[i].weight, i_w) * tour.arrival_times[i];
  return total;
}

namespace detail {

// Recompute arrival times, end time, objective, and the deadline flag from
// order + service_points.  This is the one canonical evaluation path; every
// solver funnels its result through here.
inline void finalize_tour(Tour& tour, const std::vector<User>& users,
                          const MissionSpec& spec) {
  tour.arrival_times.assign(users.size(),
                            std::numeric_limits<double>::quiet_NaN());
  if (tour.reintegrated.size() != users.size())
    tour.reintegrated.assign(users.size(), 0);
  double clock = 0.0;
  Point3 prev = spec.station;
  for (const std::size_t i : tour.order) {
    clock += travel_time(prev, tour.service_points[i], spec.v_uav);
    tour.arrival_times[i] = clock;
    prev = tour.service_points[i];
  }
  tour.end_time = clock + travel_time(prev, spec.station, spec.v_uav);
  tour.objective = objective_value(tour, users, spec.i_w);
  tour.feasible = tour.end_time <= spec.t_max;
}

// Exact weighted-latency order by dynamic programming over visited subsets.
// Cost decomposition: a leg flown while the still-unserved set has total
// weight P delays every member of P, so it costs leg_time * P.  Hence
// f(S ∪ {k}, k) = min_j f(S, j) + t_jk * (W_total - W(S)).
// When minimize_end is set, states carry (cost, elapsed) compared
// lexicographically — used as a second pass to prefer, among objective-equal
// tours, one that meets the deadline.
inline std::vector<std::size_t> dp_order(const std::vector<double>& start_t,
                                         const std::vector<double>& leg_t,
                                         const std::vector<double>& ret_t,
                                         const std::vector<double>& w,
                                         bool minimize_end) {
  const std::size_t n = w.size();
  const std::size_t full = (std::size_t{1} << n) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  double w_total = 0.0;
  for (const double wi : w) w_total += wi;

  std::vector<double> wsum(full + 1, 0.0);
  for (std::size_t mask = 1; mask <= full; ++mask)
    wsum[mask] = wsum[mask & (mask - 1)] +
                 w[static_cast<std::size_t>(std::countr_zero(mask))];

  std::vector<double> cost((full + 1) * n, inf);
  std::vector<double> elapsed(minimize_end ? (full + 1) * n : 0, inf);
  std::vector<std::int8_t> parent((full + 1) * n, -1);

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = (std::size_t{1} << k) * n + k;
    cost[s] = start_t[k] * w_total;
    if (minimize_end) elapsed[s] = start_t[k];
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    const double pending = w_total - wsum[mask];
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1)) continue;
      const double cj = cost[mask * n + j];
      if (cj == inf) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask >> k & 1) continue;
        const std::size_t to = (mask | std::size_t{1} << k) * n + k;
        const double ck = cj + leg_t[j * n + k] * pending;
        if (minimize_end) {
          const double tk = elapsed[mask * n + j] + leg_t[j * n + k];
          if (ck < cost[to] || (ck == cost[to] && tk < elapsed[to])) {
            cost[to] = ck;
            elapsed[to] = tk;
            parent[to] = static_cast<std::int8_t>(j);
          }
        } else if (ck < cost[to]) {
          cost[to] = ck;
          parent[to] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  std::size_t best_k = 0;
  double best_c = inf, best_e = inf;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = cost[full * n + k];
    const double e = minimize_end ? elapsed[full * n + k] + ret_t[k] : 0.0;
    if (c < best_c || (minimize_end && c == best_c && e < best_e)) {
      best_c = c;
      best_e = e;
      best_k = k;
    }
  }

  std::vector<std::size_t> order(n);
  std::size_t mask = full, k = best_k;
  for (std::size_t pos = n; pos-- > 0;) {
    order[pos] = k;
    const std::int8_t p = parent[mask * n + k];
    mask ^= std::size_t{1} << k;
    if (p < 0) break;
    k = static_cast<std::size_t>(p);
  }
  return order;
}

// Or-opt + 2-opt descent with restarts, for instances too large for the DP.
// Seeding is internal and fixed, keeping optimal_order a pure function.
inline std::vector<std::size_t> local_search_order(
    const std::vector<double>& start_t, const std::vector<double>& leg_t,
    const std::vector<double>& w, std::size_t n) {
  const auto evaluate = [&](const std::vector<std::size_t>& order) {
    double clock = 0.0, obj = 0.0;
    for (std::size_t pos = 0; pos < n; ++pos) {
      clock += pos == 0 ? start_t[order[0]]
                        : leg_t[order[pos - 1] * n + order[pos]];
      obj += w[order[pos]] * clock;
    }
    return obj;
  };

  const auto improve = [&](std::vector<std::size_t>& order, double& obj) {
    bool improved = true;
    std::vector<std::size_t> trial;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < n && !improved; ++i)      // 2-opt
        for (std::size_t j = i + 1; j < n && !improved; ++j) {
          trial = order;
          std::reverse(trial.begin() + static_cast<std::ptrdiff_t>(i),
                       trial.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          const double t = evaluate(trial);
          if (t < obj) {
            order = trial;
            obj = t;
            improved = true;
          }
        }
      for (std::size_t len = 1; len <= 3 && !improved; ++len)  // or-opt
        for (std::size_t i = 0; i + len <= n && !improved; ++i)
          for (std::size_t to = 0; to + len <= n && !improved; ++to) {
            if (to == i) continue;
            trial = order;
            std::vector<std::size_t> seg(
                trial.begin() + static_cast<std::ptrdiff_t>(i),
                trial.begin() + static_cast<std::ptrdiff_t>(i + len));
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i),
                        trial.begin() + static_cast<std::ptrdiff_t>(i + len));
            trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(to),
                         seg.begin(), seg.end());
            const double t = evaluate(trial);
            if (t < obj) {
              order = trial;
              obj = t;
              improved = true;
            }
          }
    }
  };

  std::vector<std::size_t> best(n), current(n);
  for (std::size_t i = 0; i < n; ++i) best[i] = i;
  double best_obj = evaluate(best);
  improve(best, best_obj);
  for (std::uint64_t restart = 1; restart < 20; ++restart) {
    for (std::size_t i = 0; i < n; ++i) current[i] = i;
    auto rng = rng_stream(0x5EED, "order_local_search", restart);
    shuffle_vec(current, rng);
    double obj = evaluate(current);
    improve(current, obj);
    if (obj < best_obj) {
      best = current;
      best_obj = obj;
    }
  }
  return best;
}

}  // namespace detail

// Minimum-weighted-latency visit order over one fixed service point per user.
// Exact (subset DP) for up to 16 users; local-search fallback above that,
// flagged via Tour::exact.  The DP ignores the deadline; if the optimum
// violates it, a second lexicographic pass prefers an objective-equal order
// with the smallest end time, and if none fits the tour comes back with
// feasible == false so callers can reject these service points.
inline Tour optimal_order(const std::vector<Point3>& points,
                          const std::vector<User>& users,
                          const MissionSpec& spec) {
  if (points.size() != users.size())
    throw ValidationError("optimal_order: points/users size mismatch");
  const std::size_t n = users.size();
  Tour tour;
  tour.service_points = points;
  if (n == 0) {
    detail::finalize_tour(tour, users, spec);
    return tour;
  }

  std::vector<double> start_t(n), ret_t(n), leg_t(n * n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    start_t[i] = travel_time(spec.station, points[i], spec.v_uav);
    ret_t[i] = travel_time(points[i], spec.station, spec.v_uav);
    w[i] = std::pow(users[i].weight, spec.i_w);
    for (std::size_t j = 0; j < n; ++j)
      leg_t[i * n + j] = travel_time(points[i], points[j], spec.v_uav);
  }

  if (n <= 16) {
    tour.order = detail::dp_order(start_t, leg_t, ret_t, w, false);
    detail::finalize_tour(tour, users, spec);
    if (!tour.feasible) {
      tour.order = detail::dp_order(start_t, leg_t, ret_t, w, true);
      detail::finalize_tour(tour, users, spec);
    }
  } else {
    tour.order = detail::local_search_order(start_t, leg_t, w, n);
    tour.exact = false;
    detail::finalize_tour(tour, users, spec);
  }
  return tour;
}

// Random-restart heuristic: each iteration draws one uniform-random valid
// cell per user, solves the order exactly, and the best feasible tour over
// all iterations wins (ties to the earliest iteration).
inline Tour heuristic_solve(const std::vector<ServiceAreaGrid>& areas,
                            const MissionSpec& spec, std::size_t iterations,
                            std::uint64_t seed) {
  const std::size_t n = spec.users.size();
  if (areas.size() != n)
    throw ValidationError("heuristic_solve: one service area per user required");
  if (iterations < 1)
    throw ValidationError("heuristic_solve: iterations must be >= 1");
  std::vector<std::vector<std::size_t>> ones(n);
  for (std::size_t i = 0; i < n; ++i) {
    ones[i] = areas[i].one_cells();
    if (ones[i].empty())
      throw InfeasibleError("user '" + spec.users[i].id +
                            "' has no valid service cell");
  }

  std::optional<Tour> best;
  std::vector<Point3> points(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    auto rng = rng_stream(seed, "points", it);
    for (std::size_t i = 0; i < n; ++i)
      points[i] =
          areas[i].center_of_flat(ones[i][uniform_index(rng, ones[i].size())]);
    Tour tour = optimal_order(points, spec.users, spec);
    if (tour.feasible && (!best || tour.objective < best->objective))
      best = std::move(tour);
  }
  if (!best)
    throw InfeasibleError("no feasible tour found in " +
                          std::to_string(iterations) + " iterations");
  return *best;
}

// Insert each excluded user (heaviest first) into an existing feasible tour.
// Stage 1 walks the tour polyline at the grid resolution and takes the
// earliest on-path point that validly serves the user — a zero-detour
// insertion that leaves every retained arrival time unchanged.  Stage 2 falls
// back to cheapest insertion of one of the user's own valid cells, trying
// candidates in increasing added-detour order until one meets the deadline.
// Returns nothing if any user cannot be placed.
inline std::optional<Tour> reintegrate_excluded(
    const Tour& tour, const std::vector<std::size_t>& excluded,
    const std::vector<ServiceAreaGrid>& areas, const MissionSpec& spec,
    const ObstacleMap& map, const LinkBudget& budget) {
  Tour cur = tour;
  if (cur.reintegrated.size() != spec.users.size())
    cur.reintegrated.assign(spec.users.size(), 0);

  std::vector<std::size_t> queue = excluded;
  std::sort(queue.begin(), queue.end(), [&](std::size_t a, std::size_t b) {
    if (spec.users[a].weight != spec.users[b].weight)
      return spec.users[a].weight > spec.users[b].weight;
    return spec.users[a].id < spec.users[b].id;
  });

  for (const std::size_t u : queue) {
    const User& user = spec.users[u];
    const double d_max = max_service_distance(user.weight, budget);
    const GridSpec& gs = areas[u].spec();
    const double step = std::min(gs.dx, gs.dy);

    // Polyline vertices: station, service points in visit order, station.
    std::vector<Point3> verts;
    verts.push_back(spec.station);
    for (const std::size_t i : cur.order)
      verts.push_back(cur.service_points[i]);
    verts.push_back(spec.station);

    bool placed = false;
    for (std::size_t leg = 0; leg + 1 < verts.size() && !placed; ++leg) {
      const Point3& a = verts[leg];
      const Point3& b = verts[leg + 1];
      const auto samples = static_cast<std::size_t>(
          std::max(1.0, std::ceil(distance(a, b) / step)));
      for (std::size_t s = 0; s <= samples && !placed; ++s) {
        const Point3 p =
            lerp(a, b, static_cast<double>(s) / static_cast<double>(samples));
        if (!validate_service_point(p, user, map, d_max)) continue;
        cur.order.insert(cur.order.begin() + static_cast<std::ptrdiff_t>(leg),
                         u);
        cur.service_points[u] = p;
        cur.reintegrated[u] = 1;
        placed = true;
      }
    }

    if (!placed) {
      // (added distance, insert position, flat cell) — ascending detour.
      std::vector<std::tuple<double, std::size_t, std::size_t>> cands;
      for (const std::size_t flat : areas[u].one_cells()) {
        const Point3 c = areas[u].center_of_flat(flat);
        for (std::size_t pos = 0; pos + 1 < verts.size(); ++pos) {
          const double added = distance(verts[pos], c) +
                               distance(c, verts[pos + 1]) -
                               distance(verts[pos], verts[pos + 1]);
          cands.emplace_back(added, pos, flat);
        }
      }
      std::sort(cands.begin(), cands.end());
      for (const auto& [added, pos, flat] : cands) {
        Tour trial = cur;
        trial.order.insert(
            trial.order.begin() + static_cast<std::ptrdiff_t>(pos), u);
        trial.service_points[u] = areas[u].center_of_flat(flat);
        trial.reintegrated[u] = 1;
        detail::finalize_tour(trial, spec.users, spec);
        if (trial.feasible) {
          cur = std::move(trial);
          placed = true;
          break;
        }
      }
      if (!placed) return std::nullopt;
    } else {
      detail::finalize_tour(cur, spec.users, spec);
      if (!cur.feasible) return std::nullopt;
    }
  }
  detail::finalize_tour(cur, spec.users, spec);
  if (!cur.feasible) return std::nullopt;
  return cur;
}

// Exclusion/reintegration heuristic.  Each iteration draws service points
// like heuristic_solve (same "points" stream, so a zero-exclusion iteration
// reproduces the plain heuristic bit-for-bit), then excludes a random number
// of the lowest-priority users, solves the rest exactly, and reintegrates.
// Iterations that fail to serve everyone are rejected.
inline Tour advanced_solve(const std::vector<ServiceAreaGrid>& areas,
                           const MissionSpec& spec, const ObstacleMap& map,
                           const LinkBudget& budget, std::size_t iterations,
                           std::uint64_t seed) {
  const std::size_t n = spec.users.size();
  if (areas.size() != n)
    throw ValidationError("advanced_solve: one service area per user required");
  if (iterations < 1)
    throw ValidationError("advanced_solve: iterations must be >= 1");
  std::vector<std::vector<std::size_t>> ones(n);
  for (std::size_t i = 0; i < n; ++i) {
    ones[i] = areas[i].one_cells();
    if (ones[i].empty())
      throw InfeasibleError("user '" + spec.users[i].id +
                            "' has no valid service cell");
  }

  // Exclusion-eligible pool: the floor(n/2) lightest users, ties by id.
  std::vector<std::size_t> by_weight(n);
  for (std::size_t i = 0; i < n; ++i) by_weight[i] = i;
  std::sort(by_weight.begin(), by_weight.end(),
            [&](std::size_t a, std::size_t b) {
              return std::tie(spec.users[a].weight, spec.users[a].id) <
                     std::tie(spec.users[b].weight, spec.users[b].id);
            });
  const std::size_t half = n / 2;
  const std::vector<std::size_t> pool(by_weight.begin(),
                                      by_weight.begin() +
                                          static_cast<std::ptrdiff_t>(half));

  std::optional<Tour> best;
  std::vector<Point3> points(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    auto rng_pts = rng_stream(seed, "points", it);
    for (std::size_t i = 0; i < n; ++i)
      points[i] = areas[i].center_of_flat(
          ones[i][uniform_index(rng_pts, ones[i].size())]);

    auto rng_ex = rng_stream(seed, "exclusion", it);
    const std::size_t n_excl =
        static_cast<std::size_t>(uniform_index(rng_ex, half + 1));
    std::vector<std::size_t> picks = pool;
    shuffle_vec(picks, rng_ex);
    picks.resize(n_excl);

    std::vector<std::uint8_t> is_excluded(n, 0);
    for (const std::size_t u : picks) is_excluded[u] = 1;
    std::vector<std::size_t> retained;
    std::vector<Point3> sub_points;
    std::vector<User> sub_users;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_excluded[i]) continue;
      retained.push_back(i);
      sub_points.push_back(points[i]);
      sub_users.push_back(spec.users[i]);
    }

    const Tour sub = optimal_order(sub_points, sub_users, spec);
    if (!sub.feasible) continue;

    Tour full;
    full.service_points.assign(n, spec.station);
    full.reintegrated.assign(n, 0);
    for (const std::size_t k : sub.order) full.order.push_back(retained[k]);
    for (std::size_t k = 0; k < retained.size(); ++k)
      full.service_points[retained[k]] = sub_points[k];
    detail::finalize_tour(full, spec.users, spec);

    std::optional<Tour> candidate =
        picks.empty() ? std::make_optional(std::move(full))
                      : reintegrate_excluded(full, picks, areas, spec, map,
                                             budget);
    if (!candidate || !candidate->feasible) continue;
    if (!best || candidate->objective < best->objective)
      best = std::move(*candidate);
  }
  if (!best)
    throw InfeasibleError("no feasible tour found in " +
                          std::to_string(iterations) + " iterations");
  return *best;
}

}  // namespace skyserve
