#include "dttp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

namespace dttp {

namespace {

constexpr Method kMethods[3] = {Method::Solver, Method::Greedy, Method::Random};

std::vector<std::pair<Method, Method>> all_nine_cells() {
  std::vector<std::pair<Method, Method>> cells;
  for (Method t : kMethods)
    for (Method p : kMethods) cells.emplace_back(t, p);
  return cells;
}

std::string fmt_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

StrategySpec StrategySpec::from_id(const std::string& id) {
  StrategySpec s;
  s.id = id;
  if (id.size() == 2 && (id[0] == 's' || id[0] == 'g' || id[0] == 'r') &&
      (id[1] == 's' || id[1] == 'g' || id[1] == 'r')) {
    s.cells = {{method_from_code(id[0]), method_from_code(id[1])}};
    return s;
  }
  if (id == "pS" || id == "pG" || id == "pR") {
    const Method m = method_from_code(static_cast<char>(std::tolower(id[1])));
    s.cells = {{m, m}};
    return s;
  }
  if (id == "mS" || id == "mG" || id == "mR") {
    const Method t = method_from_code(static_cast<char>(std::tolower(id[1])));
    for (Method p : kMethods) s.cells.emplace_back(t, p);
    return s;
  }
  if (id == "mC") {
    s.cells = all_nine_cells();
    return s;
  }
  if (id == "mN") {
    s.cells = all_nine_cells();
    s.responds = false;
    return s;
  }
  throw ConfigError("unknown strategy id '" + id + "'");
}

const std::vector<std::string>& StrategySpec::dynamic_ids() {
  static const std::vector<std::string> ids = {"pS", "pG", "pR", "mS",
                                               "mG", "mR", "mC", "mN"};
  return ids;
}

const std::vector<std::string>& StrategySpec::static_ids() {
  static const std::vector<std::string> ids = {"ss", "sg", "sr", "gs", "gg",
                                               "gr", "rs", "rg", "rr"};
  return ids;
}

void validate_config(const EaConfig& config) {
  if (config.pop_size < 4 || config.pop_size % 2 != 0)
    throw ConfigError("population size must be even and >= 4");
  if (config.generations_static < 1) throw ConfigError("generations must be >= 1");
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!probability(config.crossover_rate) || !probability(config.tour_swap_rate) ||
      (config.bitflip_rate >= 0.0 && !probability(config.bitflip_rate)))
    throw ConfigError("rates must be probabilities in [0, 1]");
  if (config.tournament_size != 2)
    throw ConfigError("only binary tournament selection is supported");
  if (config.solver_passes < 1) throw ConfigError("solver passes must be >= 1");
}

ObjectivePoint objective_point(const Individual& ind) {
  return ObjectivePoint{ind.eval.tour_time, ind.eval.final_profit};
}

std::vector<ObjectivePoint> objective_points(const Population& pop) {
  std::vector<ObjectivePoint> pts;
  pts.reserve(pop.size());
  for (const Individual& ind : pop) pts.push_back(objective_point(ind));
  return pts;
}

namespace {

Individual evaluated(Solution sol, const TtpInstance& inst) {
  Individual ind;
  ind.eval = evaluate(inst, sol.tour, sol.plan);
  ind.sol = std::move(sol);
  return ind;
}

}  // namespace

Population initialize(const StrategySpec& strategy, const TtpInstance& inst,
                      const EaConfig& config, Rng& rng) {
  validate_config(config);
  if (strategy.cells.empty()) throw ConfigError("strategy has no construction cells");

  const int k = static_cast<int>(strategy.cells.size());
  const int base_share = config.pop_size / k;
  const int remainder = config.pop_size % k;

  GenotypeSet seen;
  std::vector<Solution> members;
  members.reserve(static_cast<std::size_t>(config.pop_size));

  for (int c = 0; c < k; ++c) {
    const auto [tour_method, packing_method] = strategy.cells[static_cast<std::size_t>(c)];
    const int share = base_share + (c < remainder ? 1 : 0);
    if (share == 0) continue;

    if (tour_method == Method::Random && packing_method == Method::Random) {
      // Fully independent random solutions.
      int added = 0;
      std::uint64_t attempts_left = 2000ull * static_cast<std::uint64_t>(share) + 20000ull;
      while (added < share) {
        if (attempts_left-- == 0)
          throw ValidationError("cannot draw enough unique random solutions");
        Solution sol;
        sol.tour = random_tour(inst, rng);
        sol.plan = kp_to_packing_plan(random_packing(inst, rng), inst);
        sol.tour_origin = Method::Random;
        sol.packing_origin = Method::Random;
        if (!seen.insert(sol).second) continue;
        members.push_back(std::move(sol));
        ++added;
      }
    } else {
      Solution seed;
      seed.tour = make_tour(tour_method, inst, rng, config.solver_passes);
      seed.plan = kp_to_packing_plan(make_selection(packing_method, inst, rng), inst);
      seed.tour_origin = tour_method;
      seed.packing_origin = packing_method;
      for (Solution& sol : expand_to_population(seed, share, inst, rng, &seen))
        members.push_back(std::move(sol));
    }
  }

  Population pop;
  pop.reserve(members.size());
  for (Solution& sol : members) pop.push_back(evaluated(std::move(sol), inst));
  return pop;
}

std::vector<std::vector<int>> nondominated_sort(Population& pop) {
  const int n = static_cast<int>(pop.size());
  std::vector<std::vector<int>> dominated_by(static_cast<std::size_t>(n));
  std::vector<int> domination_count(static_cast<std::size_t>(n), 0);
  std::vector<ObjectivePoint> pts = objective_points(pop);

  std::vector<std::vector<int>> fronts(1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dominates(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]))
        dominated_by[static_cast<std::size_t>(i)].push_back(j);
      else if (dominates(pts[static_cast<std::size_t>(j)], pts[static_cast<std::size_t>(i)]))
        ++domination_count[static_cast<std::size_t>(i)];
    }
    if (domination_count[static_cast<std::size_t>(i)] == 0) {
      pop[static_cast<std::size_t>(i)].rank = 0;
      fronts[0].push_back(i);
    }
  }

  int current = 0;
  while (!fronts[static_cast<std::size_t>(current)].empty()) {
    std::vector<int> next;
    for (int i : fronts[static_cast<std::size_t>(current)]) {
      for (int j : dominated_by[static_cast<std::size_t>(i)]) {
        if (--domination_count[static_cast<std::size_t>(j)] == 0) {
          pop[static_cast<std::size_t>(j)].rank = current + 1;
          next.push_back(j);
        }
      }
    }
    if (next.empty()) break;
    fronts.push_back(std::move(next));
    ++current;
  }
  return fronts;
}

void assign_crowding(Population& pop, const std::vector<int>& front) {
  const double inf = std::numeric_limits<double>::infinity();
  for (int i : front) pop[static_cast<std::size_t>(i)].crowding = 0.0;
  if (front.size() <= 2) {
    for (int i : front) pop[static_cast<std::size_t>(i)].crowding = inf;
    return;
  }
  auto sweep = [&pop, &front, inf](auto key) {
    std::vector<int> order = front;
    std::sort(order.begin(), order.end(), [&pop, key](int a, int b) {
      const double ka = key(pop[static_cast<std::size_t>(a)]);
      const double kb = key(pop[static_cast<std::size_t>(b)]);
      if (ka != kb) return ka < kb;
      return a < b;
    });
    const double lo = key(pop[static_cast<std::size_t>(order.front())]);
    const double hi = key(pop[static_cast<std::size_t>(order.back())]);
    pop[static_cast<std::size_t>(order.front())].crowding = inf;
    pop[static_cast<std::size_t>(order.back())].crowding = inf;
    if (hi == lo) return;
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
      const double span = key(pop[static_cast<std::size_t>(order[k + 1])]) -
                          key(pop[static_cast<std::size_t>(order[k - 1])]);
      pop[static_cast<std::size_t>(order[k])].crowding += span / (hi - lo);
    }
  };
  sweep([](const Individual& ind) { return ind.eval.tour_time; });
  sweep([](const Individual& ind) { return ind.eval.final_profit; });
}

namespace {

void rank_population(Population& pop) {
  const auto fronts = nondominated_sort(pop);
  for (const auto& front : fronts) assign_crowding(pop, front);
}

/// (rank, crowding) comparison; true when a is strictly better.
bool better(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

const Individual& tournament(const Population& pop, Rng& rng) {
  const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(pop.size()) - 1));
  const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(pop.size()) - 1));
  return better(pop[j], pop[i]) ? pop[j] : pop[i];  // ties keep the first draw
}

/// Order crossover on the positions 1..N-1 (city 1 fixed at the front).
Tour order_crossover(const Tour& p1, const Tour& p2, Rng& rng) {
  const int n = static_cast<int>(p1.order.size());
  const int lo = static_cast<int>(rng.uniform_int(1, n - 1));
  const int hi = static_cast<int>(rng.uniform_int(1, n - 1));
  const int a = std::min(lo, hi);
  const int b = std::max(lo, hi);

  Tour child;
  child.order.assign(static_cast<std::size_t>(n), 0);
  child.order[0] = 1;
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  used[1] = 1;
  for (int k = a; k <= b; ++k) {
    child.order[static_cast<std::size_t>(k)] = p1.order[static_cast<std::size_t>(k)];
    used[p1.order[static_cast<std::size_t>(k)]] = 1;
  }
  // Fill remaining slots from p2 in tour order, starting after the segment.
  int fill = b + 1 > n - 1 ? 1 : b + 1;
  for (int off = 0; off < n - 1; ++off) {
    const int idx = 1 + (b + off) % (n - 1);  // positions 1..n-1 from b+1 wrapping
    const int city = p2.order[static_cast<std::size_t>(idx)];
    if (used[city]) continue;
    while (child.order[static_cast<std::size_t>(fill)] != 0)
      fill = fill == n - 1 ? 1 : fill + 1;
    child.order[static_cast<std::size_t>(fill)] = city;
    used[city] = 1;
  }
  return child;
}

std::pair<Solution, Solution> crossover(const Solution& p1, const Solution& p2,
                                        const TtpInstance& inst, Rng& rng) {
  Solution c1, c2;
  c1.tour = order_crossover(p1.tour, p2.tour, rng);
  c2.tour = order_crossover(p2.tour, p1.tour, rng);

  const int m = inst.n_items();
  auto m1 = plan_to_mask(p1.plan, m);
  auto m2 = plan_to_mask(p2.plan, m);
  const auto cut = static_cast<std::size_t>(rng.uniform_int(0, m));
  for (std::size_t i = cut; i < static_cast<std::size_t>(m); ++i)
    std::swap(m1[i], m2[i]);
  repair_capacity(m1, inst);
  repair_capacity(m2, inst);
  c1.plan = mask_to_plan(m1);
  c2.plan = mask_to_plan(m2);
  return {std::move(c1), std::move(c2)};
}

void mutate(Solution& sol, const TtpInstance& inst, const EaConfig& config, Rng& rng) {
  if (rng.chance(config.tour_swap_rate)) swap_mutation(sol.tour, rng);
  const int m = inst.n_items();
  const double rate = config.bitflip_rate < 0.0 ? 1.0 / m : config.bitflip_rate;
  if (rate <= 0.0) return;
  auto mask = plan_to_mask(sol.plan, m);
  bool flipped = false;
  for (int i = 0; i < m; ++i) {
    if (rng.chance(rate)) {
      mask[static_cast<std::size_t>(i)] ^= 1;
      flipped = true;
    }
  }
  if (flipped) {
    repair_capacity(mask, inst);
    sol.plan = mask_to_plan(mask);
  }
}

/// (survivors first, then candidates) deduplicated by genotype, then
/// non-dominated truncation to pop_size by rank and crowding.
Population environmental_selection(Population merged, int pop_size) {
  GenotypeSet seen;
  Population unique;
  unique.reserve(merged.size());
  for (Individual& ind : merged)
    if (seen.insert(ind.sol).second) unique.push_back(std::move(ind));

  const auto fronts = nondominated_sort(unique);
  for (const auto& front : fronts) assign_crowding(unique, front);

  Population next;
  next.reserve(static_cast<std::size_t>(pop_size));
  for (const auto& front : fronts) {
    if (static_cast<int>(next.size() + front.size()) <= pop_size) {
      for (int i : front) next.push_back(unique[static_cast<std::size_t>(i)]);
    } else {
      std::vector<int> order = front;
      std::sort(order.begin(), order.end(), [&unique](int a, int b) {
        const double ca = unique[static_cast<std::size_t>(a)].crowding;
        const double cb = unique[static_cast<std::size_t>(b)].crowding;
        if (ca != cb) return ca > cb;
        return a < b;
      });
      for (int i : order) {
        if (static_cast<int>(next.size()) == pop_size) break;
        next.push_back(unique[static_cast<std::size_t>(i)]);
      }
    }
    if (static_cast<int>(next.size()) == pop_size) break;
  }
  return next;
}

}  // namespace

Population step_generation(const Population& pop, const TtpInstance& inst,
                           const EaConfig& config, Rng& rng) {
  validate_config(config);
  Population parents = pop;
  rank_population(parents);

  Population offspring;
  offspring.reserve(parents.size());
  while (static_cast<int>(offspring.size()) < config.pop_size) {
    const Individual& p1 = tournament(parents, rng);
    const Individual& p2 = tournament(parents, rng);
    Solution c1, c2;
    if (rng.chance(config.crossover_rate)) {
      std::tie(c1, c2) = crossover(p1.sol, p2.sol, inst, rng);
    } else {
      c1 = p1.sol;
      c2 = p2.sol;
    }
    // Offspring keep the lineage tags of the parent they are built around.
    c1.tour_origin = p1.sol.tour_origin;
    c1.packing_origin = p1.sol.packing_origin;
    c2.tour_origin = p2.sol.tour_origin;
    c2.packing_origin = p2.sol.packing_origin;
    mutate(c1, inst, config, rng);
    mutate(c2, inst, config, rng);
    offspring.push_back(evaluated(std::move(c1), inst));
    if (static_cast<int>(offspring.size()) < config.pop_size)
      offspring.push_back(evaluated(std::move(c2), inst));
  }

  Population merged = std::move(parents);
  merged.reserve(merged.size() + offspring.size());
  for (Individual& child : offspring) merged.push_back(std::move(child));
  return environmental_selection(std::move(merged), config.pop_size);
}

Population respond_to_change(const StrategySpec& strategy, const TtpInstance& inst,
                             const Population& pop, const EaConfig& config, Rng& rng) {
  Population survivors;
  survivors.reserve(pop.size());
  for (const Individual& ind : pop) survivors.push_back(evaluated(ind.sol, inst));
  if (!strategy.responds) return survivors;

  Population response = initialize(strategy, inst, config, rng);
  Population merged = std::move(survivors);
  merged.reserve(merged.size() + response.size());
  for (Individual& ind : response) merged.push_back(std::move(ind));
  return environmental_selection(std::move(merged), config.pop_size);
}

namespace {

struct IntervalArchive {
  std::vector<ObjectivePoint> points;

  void absorb(const Population& pop) {
    std::vector<ObjectivePoint> merged = points;
    for (const Individual& ind : pop)
      if (ind.rank == 0) merged.push_back(objective_point(ind));
    points = nondominated_points(merged);
  }
  void reset() { points.clear(); }
};

}  // namespace

RunTrace run_dynamic(const TtpInstance& base, const ChangeSchedule& schedule,
                     const StrategySpec& strategy, const EaConfig& config, Rng& rng) {
  validate_config(config);
  validate_schedule(schedule, base);

  const NadirPoint ref = nadir(base);
  const int period = schedule.config.period;
  const int total_generations = period * (schedule.config.n_changes + 1);

  std::map<int, const ChangeEvent*> events;
  for (const ChangeEvent& e : schedule.events) {
    if (e.at_generation > total_generations)
      throw ValidationError("event beyond the run horizon");
    events[e.at_generation] = &e;
  }

  RunTrace trace;
  TtpInstance inst = base;
  Population pop = initialize(strategy, inst, config, rng);
  rank_population(pop);

  IntervalArchive archive;
  int interval = 0;
  double last_archive_hv = 0.0;

  auto record = [&](int generation) {
    archive.absorb(pop);
    const double archive_hv = hypervolume(archive.points, ref);
    const auto pts = objective_points(pop);
    trace.records.push_back(GenRecord{generation, interval, hypervolume(pts, ref),
                                      max_spread(pts), archive_hv});
    if (archive_hv < last_archive_hv - 1e-12 * std::max(1.0, last_archive_hv))
      ++trace.archive_violations;
    last_archive_hv = archive_hv;
  };

  record(0);
  for (int g = 1; g <= total_generations; ++g) {
    const auto it = events.find(g);
    if (it != events.end()) {
      // End-of-interval snapshot of the pre-change population.
      const auto pts = objective_points(pop);
      trace.snapshots.push_back(
          IntervalSnapshot{interval, hypervolume(pts, ref), max_spread(pts), pop});
      inst = apply_change(inst, *it->second);
      pop = respond_to_change(strategy, inst, pop, config, rng);
      rank_population(pop);
      ++interval;
      archive.reset();
      last_archive_hv = 0.0;
    } else {
      pop = step_generation(pop, inst, config, rng);
    }
    record(g);
  }

  const auto pts = objective_points(pop);
  trace.snapshots.push_back(
      IntervalSnapshot{interval, hypervolume(pts, ref), max_spread(pts), pop});
  trace.final_population = std::move(pop);
  return trace;
}

double tour_conservation(const Tour& initial, const Tour& final_tour) {
  const int n = static_cast<int>(initial.order.size());
  auto edge_key = [](int a, int b) {
    return std::pair<int, int>{std::min(a, b), std::max(a, b)};
  };
  std::map<std::pair<int, int>, int> final_edges;
  const int nf = static_cast<int>(final_tour.order.size());
  for (int k = 0; k < nf; ++k)
    ++final_edges[edge_key(final_tour.order[static_cast<std::size_t>(k)],
                           final_tour.order[static_cast<std::size_t>((k + 1) % nf)])];
  int retained = 0;
  for (int k = 0; k < n; ++k) {
    const auto key = edge_key(initial.order[static_cast<std::size_t>(k)],
                              initial.order[static_cast<std::size_t>((k + 1) % n)]);
    const auto it = final_edges.find(key);
    if (it != final_edges.end() && it->second > 0) {
      --it->second;
      ++retained;
    }
  }
  return 100.0 * retained / n;
}

double packing_conservation(const PackingPlan& initial, const PackingPlan& final_plan,
                            const TtpInstance& inst) {
  if (initial.picks.empty() && final_plan.picks.empty()) return 100.0;
  if (initial.picks.empty() || final_plan.picks.empty()) return 0.0;

  std::vector<int> shared;
  std::set_intersection(initial.picks.begin(), initial.picks.end(),
                        final_plan.picks.begin(), final_plan.picks.end(),
                        std::back_inserter(shared));
  const double denom =
      static_cast<double>(std::max(initial.picks.size(), final_plan.picks.size()));
  const double item_overlap = static_cast<double>(shared.size()) / denom;

  std::map<int, int> cities_a, cities_b;
  for (int id : initial.picks) ++cities_a[inst.item(id).city];
  for (int id : final_plan.picks) ++cities_b[inst.item(id).city];
  double city_hits = 0.0;
  for (const auto& [city, count] : cities_a) {
    const auto it = cities_b.find(city);
    if (it != cities_b.end()) city_hits += std::min(count, it->second);
  }
  const double city_overlap = city_hits / denom;
  return 100.0 * (0.5 * item_overlap + 0.5 * city_overlap);
}

const char* const kSnapshotCsvHeader = "run_id,interval,end_hv,end_spread\n";

void write_trace_csv(std::ostream& out, const RunTrace& trace, const std::string& run_id,
                     const std::string& strategy, std::uint64_t schedule_seed) {
  out << "run_id,strategy,schedule_seed,generation,interval,hypervolume,spread\n";
  for (const GenRecord& r : trace.records)
    out << run_id << ',' << strategy << ',' << schedule_seed << ',' << r.generation
        << ',' << r.interval << ',' << fmt_csv_double(r.hypervolume) << ','
        << fmt_csv_double(r.spread) << '\n';
}

void write_snapshot_rows(std::ostream& out, const RunTrace& trace,
                         const std::string& run_id) {
  for (const IntervalSnapshot& s : trace.snapshots)
    out << run_id << ',' << s.interval << ',' << fmt_csv_double(s.hypervolume) << ','
        << fmt_csv_double(s.spread) << '\n';
}

}  // namespace dttp
