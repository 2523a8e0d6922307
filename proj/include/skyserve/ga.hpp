#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skyserve/coverage.hpp"
#include "skyserve/errors.hpp"
#include "skyserve/rng.hpp"
#include "skyserve/routing.hpp"

namespace skyserve {

struct CellIndex {
  std::size_t m_x = 0;
  std::size_t m_y = 0;
};

// Joint encoding of a candidate trajectory: the visit order plus one grid
// cell per user.  Cells are free to address 0-cells — that is penalized, not
// repaired, so the operators never need validity knowledge.
struct Chromosome {
  std::vector<std::size_t> order;
  std::vector<CellIndex> cell_choice;
};

struct GaConfig {
  std::size_t population = 100;
  std::size_t generations = 500;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  double lambda = 1e3;  // per second of deadline violation
  double mu = 1e6;      // per user parked on an invalid cell
  double gamma = 0.0;   // station-return penalty; tours close by construction
  std::uint64_t seed = 0;
};

namespace detail {

struct GaEval {
  Tour tour;
  std::size_t invalid_cells = 0;
  double penalized = 0.0;
  bool feasible = false;
};

inline GaEval ga_evaluate(const Chromosome& ch,
                          const std::vector<ServiceAreaGrid>& areas,
                          const MissionSpec& spec, const GaConfig& cfg) {
  GaEval ev;
  const std::size_t n = areas.size();
  ev.tour.order = ch.order;
  ev.tour.service_points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CellIndex& c = ch.cell_choice[i];
    ev.tour.service_points[i] = cell_center(areas[i].spec(), c.m_x, c.m_y);
    if (!areas[i].at(c.m_x, c.m_y)) ++ev.invalid_cells;
  }
  finalize_tour(ev.tour, spec.users, spec);
  ev.penalized = ev.tour.objective +
                 cfg.lambda * std::max(0.0, ev.tour.end_time - spec.t_max) +
                 cfg.mu * static_cast<double>(ev.invalid_cells);
  ev.feasible = ev.tour.feasible && ev.invalid_cells == 0;
  ev.tour.exact = false;
  return ev;
}

// Order crossover: child keeps parent A's slice [cut1, cut2] in place and
// fills the remaining slots with the missing users in parent B's order.
inline std::vector<std::size_t> order_crossover(
    const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
    std::size_t cut1, std::size_t cut2) {
  const std::size_t n = a.size();
  std::vector<std::size_t> child(n, n);
  std::vector<std::uint8_t> taken(n, 0);
  for (std::size_t i = cut1; i <= cut2; ++i) {
    child[i] = a[i];
    taken[a[i]] = 1;
  }
  std::size_t fill = 0;
  for (const std::size_t v : b) {
    if (taken[v]) continue;
    while (fill >= cut1 && fill <= cut2) ++fill;
    child[fill++] = v;
  }
  return child;
}

}  // namespace detail

// Penalized objective J = sum w^I_w t + lambda*max(0, t_end - T_max)
// + mu*(invalid cells).  Equals the plain weighted-latency objective whenever
// both penalties vanish.  The station-return term is structurally zero here:
// decoded tours always close at the station.
inline double fitness(const Chromosome& ch,
                      const std::vector<ServiceAreaGrid>& areas,
                      const MissionSpec& spec, const GaConfig& cfg) {
  return detail::ga_evaluate(ch, areas, spec, cfg).penalized;
}

// Genetic algorithm over (order, cell) chromosomes: tournament-3 selection,
// order crossover on the permutation + uniform crossover on the cells,
// swap/resample mutation, elitism of one.  Returns the best deadline-and-
// validity-feasible tour seen in any generation.
inline Tour ga_solve(const std::vector<ServiceAreaGrid>& areas,
                     const MissionSpec& spec, const GaConfig& cfg) {
  const std::size_t n = spec.users.size();
  if (areas.size() != n)
    throw ValidationError("ga_solve: one service area per user required");
  if (cfg.population < 2 || cfg.generations < 1)
    throw ValidationError("ga_solve: need population >= 2, generations >= 1");
  std::vector<std::vector<std::size_t>> ones(n);
  for (std::size_t i = 0; i < n; ++i) {
    ones[i] = areas[i].one_cells();
    if (ones[i].empty())
      throw InfeasibleError("user '" + spec.users[i].id +
                            "' has no valid service cell");
  }

  auto rng = rng_stream(cfg.seed, "ga", 0);
  const auto random_cell = [&](std::size_t user) {
    const std::size_t flat = ones[user][uniform_index(rng, ones[user].size())];
    return CellIndex{flat / areas[user].m_y(), flat % areas[user].m_y()};
  };

  std::vector<Chromosome> pop(cfg.population);
  for (Chromosome& ch : pop) {
    ch.order.resize(n);
    for (std::size_t i = 0; i < n; ++i) ch.order[i] = i;
    shuffle_vec(ch.order, rng);
    ch.cell_choice.resize(n);
    for (std::size_t i = 0; i < n; ++i) ch.cell_choice[i] = random_cell(i);
  }

  std::vector<double> fit(cfg.population);
  std::optional<Tour> best_feasible;
  std::size_t best_idx = 0;
  const auto evaluate_all = [&] {
    best_idx = 0;
    for (std::size_t i = 0; i < cfg.population; ++i) {
      detail::GaEval ev = detail::ga_evaluate(pop[i], areas, spec, cfg);
      fit[i] = ev.penalized;
      if (ev.feasible &&
          (!best_feasible || ev.tour.objective < best_feasible->objective))
        best_feasible = std::move(ev.tour);
      if (fit[i] < fit[best_idx]) best_idx = i;
    }
  };
  evaluate_all();

  const auto tournament = [&]() -> const Chromosome& {
    std::size_t winner = uniform_index(rng, cfg.population);
    for (int round = 0; round < 2; ++round) {
      const std::size_t rival = uniform_index(rng, cfg.population);
      if (fit[rival] < fit[winner]) winner = rival;
    }
    return pop[winner];
  };

  for (std::size_t gen = 1; gen < cfg.generations; ++gen) {
    std::vector<Chromosome> next;
    next.reserve(cfg.population);
    next.push_back(pop[best_idx]);  // elite
    while (next.size() < cfg.population) {
      Chromosome c1 = tournament();
      Chromosome c2 = tournament();
      if (uniform_unit(rng) < cfg.crossover_rate && n >= 2) {
        std::size_t cut1 = uniform_index(rng, n);
        std::size_t cut2 = uniform_index(rng, n);
        if (cut1 > cut2) std::swap(cut1, cut2);
        std::vector<std::size_t> o1 =
            detail::order_crossover(c1.order, c2.order, cut1, cut2);
        std::vector<std::size_t> o2 =
            detail::order_crossover(c2.order, c1.order, cut1, cut2);
        c1.order = std::move(o1);
        c2.order = std::move(o2);
        for (std::size_t i = 0; i < n; ++i)
          if (uniform_unit(rng) < 0.5)
            std::swap(c1.cell_choice[i], c2.cell_choice[i]);
      }
      for (Chromosome* child : {&c1, &c2}) {
        if (uniform_unit(rng) < cfg.mutation_rate && n >= 2) {
          const std::size_t i = uniform_index(rng, n);
          const std::size_t j = uniform_index(rng, n);
          std::swap(child->order[i], child->order[j]);
        }
        if (uniform_unit(rng) < cfg.mutation_rate) {
          const std::size_t i = uniform_index(rng, n);
          child->cell_choice[i] = random_cell(i);
        }
        if (next.size() < cfg.population) next.push_back(std::move(*child));
      }
    }
    pop = std::move(next);
    evaluate_all();
  }

  if (!best_feasible)
    throw InfeasibleError("no feasible tour found in " +
                          std::to_string(cfg.generations) + " generations");
  return *best_feasible;
}

}  // namespace skyserve
