// Independent reference implementations used to cross-check the library.
// These deliberately take different computational routes from the code under
// test (per-item carry accumulation, exhaustive enumeration, Monte-Carlo
// area) and must not call the functions they verify.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "dttp/instance.hpp"
#include "dttp/metrics.hpp"
#include "dttp/rng.hpp"

namespace oracles {

struct EvalResult {
  double time = 0.0;
  double profit = 0.0;
};

/// Step-by-step simulation: walks the tour accumulating each carried item's
/// carry time leg by leg, then applies the decay per item.
inline EvalResult simulate(const dttp::TtpInstance& inst, const std::vector<int>& order,
                           const std::vector<int>& picks) {
  const int n = inst.n_cities();
  std::map<int, std::vector<int>> picks_at_city;
  for (int id : picks) picks_at_city[inst.item(id).city].push_back(id);

  std::map<int, double> carry;  // item id -> accumulated carry time
  double t = 0.0;
  double load = 0.0;
  for (int k = 0; k < n; ++k) {
    const int c = order[static_cast<std::size_t>(k)];
    const int next = order[static_cast<std::size_t>((k + 1) % n)];
    const auto at_city = picks_at_city.find(c);
    if (at_city != picks_at_city.end()) {
      for (int id : at_city->second) {
        carry[id] = 0.0;
        load += inst.item(id).weight;
      }
    }
    const double v = inst.max_speed() -
                     load * (inst.max_speed() - inst.min_speed()) / inst.capacity();
    const double dt = inst.distance()(c, next) / v;
    t += dt;
    for (auto& [id, ct] : carry) ct += dt;
  }

  double profit = 0.0;
  for (const auto& [id, ct] : carry) {
    const double q = ct / inst.drop_constant();
    const double r = std::nearbyint(q);
    double k = std::abs(q - r) <= 1e-12 * std::max(1.0, std::abs(q)) ? r : std::ceil(q);
    if (k < 1.0) k = 1.0;
    profit += inst.item(id).profit * std::pow(inst.drop_rate(), k);
  }
  return EvalResult{t, profit};
}

/// All tours starting at city 1, by enumeration of the remaining cities.
inline std::vector<std::vector<int>> all_tours(int n) {
  std::vector<int> rest;
  for (int c = 2; c <= n; ++c) rest.push_back(c);
  std::vector<std::vector<int>> tours;
  do {
    std::vector<int> order{1};
    order.insert(order.end(), rest.begin(), rest.end());
    tours.push_back(std::move(order));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return tours;
}

/// All feasible item subsets (sum of weights <= capacity).
inline std::vector<std::vector<int>> all_feasible_picks(const dttp::TtpInstance& inst) {
  const int m = inst.n_items();
  std::vector<std::vector<int>> result;
  for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
    double w = 0.0;
    std::vector<int> picks;
    for (int i = 0; i < m; ++i) {
      if (bits & (1u << i)) {
        picks.push_back(i + 1);
        w += inst.item(i + 1).weight;
      }
    }
    if (w <= inst.capacity()) result.push_back(std::move(picks));
  }
  return result;
}

/// Exact cycle length of the best tour by brute force.
inline double optimal_tour_length(const dttp::TtpInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  const int n = inst.n_cities();
  for (const auto& order : all_tours(n)) {
    double len = 0.0;
    for (int k = 0; k < n; ++k)
      len += inst.distance()(order[static_cast<std::size_t>(k)],
                             order[static_cast<std::size_t>((k + 1) % n)]);
    best = std::min(best, len);
  }
  return best;
}

/// Best knapsack profit by Gray-code subset enumeration (m <= 24).
inline double best_knapsack_profit(const std::vector<dttp::Item>& items, double capacity) {
  const int m = static_cast<int>(items.size());
  double weight = 0.0, profit = 0.0, best = 0.0;
  std::vector<char> in(static_cast<std::size_t>(m), 0);
  const std::uint32_t total = 1u << m;
  for (std::uint32_t s = 1; s < total; ++s) {
    const int bit = static_cast<int>(std::countr_zero(s));
    if (in[static_cast<std::size_t>(bit)]) {
      weight -= items[static_cast<std::size_t>(bit)].weight;
      profit -= items[static_cast<std::size_t>(bit)].profit;
      in[static_cast<std::size_t>(bit)] = 0;
    } else {
      weight += items[static_cast<std::size_t>(bit)].weight;
      profit += items[static_cast<std::size_t>(bit)].profit;
      in[static_cast<std::size_t>(bit)] = 1;
    }
    if (weight <= capacity && profit > best) best = profit;
  }
  return best;
}

/// Monte-Carlo estimate of the dominated area between a front and the nadir.
inline double mc_hypervolume(const std::vector<dttp::ObjectivePoint>& points,
                             const dttp::NadirPoint& nadir, std::uint64_t samples,
                             dttp::Rng& rng) {
  std::vector<dttp::ObjectivePoint> inside;
  for (const auto& p : points)
    if (p.f < nadir.tour_bound && p.g > nadir.profit_bound) inside.push_back(p);
  if (inside.empty()) return 0.0;
  double f_lo = inside[0].f, g_hi = inside[0].g;
  for (const auto& p : inside) {
    f_lo = std::min(f_lo, p.f);
    g_hi = std::max(g_hi, p.g);
  }
  const double box = (nadir.tour_bound - f_lo) * (g_hi - nadir.profit_bound);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double f = rng.uniform_real(f_lo, nadir.tour_bound);
    const double g = rng.uniform_real(nadir.profit_bound, g_hi);
    for (const auto& p : inside) {
      if (p.f <= f && p.g >= g) {
        ++hits;
        break;
      }
    }
  }
  return box * static_cast<double>(hits) / static_cast<double>(samples);
}

/// Pareto fronts by repeated peeling with a quadratic dominance matrix.
inline std::vector<int> front_ranks(const std::vector<dttp::ObjectivePoint>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> rank(static_cast<std::size_t>(n), -1);
  int assigned = 0;
  int level = 0;
  while (assigned < n) {
    std::vector<int> current;
    for (int i = 0; i < n; ++i) {
      if (rank[static_cast<std::size_t>(i)] >= 0) continue;
      bool dominated = false;
      for (int j = 0; j < n && !dominated; ++j) {
        if (i == j || rank[static_cast<std::size_t>(j)] >= 0) continue;
        dominated = dttp::dominates(pts[static_cast<std::size_t>(j)],
                                    pts[static_cast<std::size_t>(i)]);
      }
      if (!dominated) current.push_back(i);
    }
    for (int i : current) rank[static_cast<std::size_t>(i)] = level;
    assigned += static_cast<int>(current.size());
    ++level;
  }
  return rank;
}

/// Small random instance for property tests: distinct real coordinates,
/// integer weights/profits, binding capacity, no item at city 1.
inline dttp::TtpInstance random_instance(dttp::Rng& rng, int n_cities, int n_items,
                                         double coord_max = 100.0) {
  std::vector<dttp::City> cities;
  for (int i = 1; i <= n_cities; ++i)
    cities.push_back(dttp::City{i, rng.uniform_real(0.0, coord_max),
                                rng.uniform_real(0.0, coord_max)});
  std::vector<dttp::Item> items;
  double weight_sum = 0.0;
  for (int i = 1; i <= n_items; ++i) {
    const double w = static_cast<double>(rng.uniform_int(2, 20));
    const double p = static_cast<double>(rng.uniform_int(1, 100));
    const int city = static_cast<int>(rng.uniform_int(2, n_cities));
    items.push_back(dttp::Item{i, p, w, city});
    weight_sum += w;
  }
  const double capacity = std::clamp(std::floor(rng.uniform_real(0.3, 0.8) * weight_sum),
                                     1.0, weight_sum - 1.0);
  return dttp::TtpInstance::create("fixture", std::move(cities), std::move(items), capacity);
}

}  // namespace oracles
