#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "skyserve/geometry.hpp"

namespace skyserve {

// Radio-link calibration.  ber_loose is the BER demanded of a weight-0 user,
// ber_strict of a weight-1 user; d_ref is the range at which the link hits
// exactly ber_loose.  Those three numbers pin the otherwise-unknown constant
// 2*c1*Pt/N0 = (Q^-1(ber_loose) * d_ref)^2, so no raw hardware parameters are
// needed anywhere.  v_uav rides along because every solver needs it.
struct LinkBudget {
  double ber_loose = 1e-3;
  double ber_strict = 1e-6;
  double d_ref = 500.0;
  double v_uav = 5.0;
};

struct User {
  std::string id;
  Point3 position;
  double weight = 1.0;  // priority, in (0, 1]
};

// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_function(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

// Inverse of q_function on (0, 0.5) by bisection; the bracket is tightened to
// 1e-13 which round-trips through q_function well below 1e-9 relative error.
inline double q_inverse(double p) {
  if (!(p > 0.0 && p < 0.5))
    throw std::domain_error("q_inverse: p must lie in (0, 0.5), got " +
                            std::to_string(p));
  double lo = 0.0;
  double hi = 8.0;
  while (q_function(hi) > p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q_function(mid) > p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Per-user BER requirement: log-linear between the loose (w=0) and strict
// (w=1) thresholds, i.e. loose^(1-w) * strict^w.  Endpoints are returned
// exactly so calibration identities hold bit-for-bit.
inline double ber_threshold(double w, const LinkBudget& budget) {
  if (w == 0.0) return budget.ber_loose;
  if (w == 1.0) return budget.ber_strict;
  return std::exp((1.0 - w) * std::log(budget.ber_loose) +
                  w * std::log(budget.ber_strict));
}

// Farthest range at which a weight-w user still gets its required BER:
// d(w) = d_ref * Q^-1(ber_loose) / Q^-1(ber_threshold(w)).  Strictly
// decreasing in w; d(0) = d_ref exactly (the ratio is computed from two
// identical q_inverse evaluations).
inline double max_service_distance(double w, const LinkBudget& budget) {
  return budget.d_ref *
         (q_inverse(budget.ber_loose) / q_inverse(ber_threshold(w, budget)));
}

// Link BER at range d under the calibrated model: Q(Q^-1(ber_loose)*d_ref/d).
inline double ber_at_distance(double d, const LinkBudget& budget) {
  return q_function(q_inverse(budget.ber_loose) * budget.d_ref / d);
}

// A UAV position serves a user iff the user is in range for its weight and
// the straight path between them clears every building.
// The d_max overload exists so grid sweeps can hoist the q_inverse calls; it
// must be fed exactly max_service_distance(user.weight, budget).
inline bool validate_service_point(const Point3& uav, const User& user,
                                   const ObstacleMap& map, double d_max) {
  return distance(uav, user.position) <= d_max &&
         check_los(uav, user.position, map);
}

inline bool validate_service_point(const Point3& uav, const User& user,
                                   const ObstacleMap& map,
                                   const LinkBudget& budget) {
  return validate_service_point(uav, user, map,
                                max_service_distance(user.weight, budget));
}

}  // namespace skyserve
