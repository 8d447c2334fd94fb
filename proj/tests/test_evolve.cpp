#include <doctest.h>

#include <map>
#include <set>

#include "dttp/evolve.hpp"
#include "oracles.hpp"

using namespace dttp;

namespace {

TtpInstance fixture(std::uint64_t seed = 5, int n = 8, int m = 10) {
  Rng rng(seed);
  return oracles::random_instance(rng, n, m);
}

EaConfig small_config() {
  EaConfig config;
  config.pop_size = 12;
  config.generations_static = 20;
  return config;
}

void check_population(const TtpInstance& inst, const Population& pop, int expected) {
  REQUIRE(static_cast<int>(pop.size()) == expected);
  GenotypeSet seen;
  for (const Individual& ind : pop) {
    CHECK(seen.insert(ind.sol).second);
    CHECK_NOTHROW(validate_tour(inst, ind.sol.tour));
    CHECK_NOTHROW(validate_plan(inst, ind.sol.plan));
  }
}

}  // namespace

TEST_SUITE_BEGIN("evolve");

TEST_CASE("strategy ids map to their construction cells") {
  CHECK(StrategySpec::from_id("ss").cells ==
        std::vector<std::pair<Method, Method>>{{Method::Solver, Method::Solver}});
  CHECK(StrategySpec::from_id("sr").cells ==
        std::vector<std::pair<Method, Method>>{{Method::Solver, Method::Random}});
  CHECK(StrategySpec::from_id("pG").cells ==
        std::vector<std::pair<Method, Method>>{{Method::Greedy, Method::Greedy}});
  const auto mS = StrategySpec::from_id("mS");
  REQUIRE(mS.cells.size() == 3);
  for (const auto& [tour_m, pack_m] : mS.cells) CHECK(tour_m == Method::Solver);
  CHECK(StrategySpec::from_id("mC").cells.size() == 9);
  const auto mN = StrategySpec::from_id("mN");
  CHECK(mN.cells.size() == 9);
  CHECK_FALSE(mN.responds);
  CHECK(StrategySpec::from_id("mC").responds);
  CHECK_THROWS_AS(StrategySpec::from_id("xx"), ConfigError);
  CHECK(StrategySpec::dynamic_ids().size() == 8);
  CHECK(StrategySpec::static_ids().size() == 9);
}

TEST_CASE("initialization fills every cell share with unique members") {
  const TtpInstance inst = fixture();
  EaConfig config = small_config();
  Rng rng(1);

  SUBCASE("pure solver carries the exact seed as member 0") {
    const Population pop = initialize(StrategySpec::from_id("ss"), inst, config, rng);
    check_population(inst, pop, config.pop_size);
    const Tour expect_tour = solver_tour(inst, config.solver_passes);
    Rng dummy(0);
    const auto expect_picks = make_selection(Method::Solver, inst, dummy);
    CHECK(pop[0].sol.tour.order == expect_tour.order);
    CHECK(pop[0].sol.plan.picks == expect_picks);
    for (const Individual& ind : pop) {
      CHECK(ind.sol.tour_origin == Method::Solver);
      CHECK(ind.sol.packing_origin == Method::Solver);
    }
  }

  SUBCASE("mC distributes 60 across 9 cells as 7x6 + 6x6") {
    config.pop_size = 60;
    const Population pop = initialize(StrategySpec::from_id("mC"), inst, config, rng);
    check_population(inst, pop, 60);
    std::map<std::pair<Method, Method>, int> per_cell;
    for (const Individual& ind : pop)
      ++per_cell[{ind.sol.tour_origin, ind.sol.packing_origin}];
    REQUIRE(per_cell.size() == 9);
    int sevens = 0, sixes = 0;
    for (const auto& [cell, count] : per_cell) {
      if (count == 7) ++sevens;
      if (count == 6) ++sixes;
    }
    CHECK(sevens == 6);
    CHECK(sixes == 3);
  }

  SUBCASE("pR members are all random-origin") {
    const Population pop = initialize(StrategySpec::from_id("pR"), inst, config, rng);
    check_population(inst, pop, config.pop_size);
    for (const Individual& ind : pop) {
      CHECK(ind.sol.tour_origin == Method::Random);
      CHECK(ind.sol.packing_origin == Method::Random);
    }
  }

  SUBCASE("mS splits the packing methods one third each") {
    config.pop_size = 12;
    const Population pop = initialize(StrategySpec::from_id("mS"), inst, config, rng);
    std::map<Method, int> per_packing;
    for (const Individual& ind : pop) ++per_packing[ind.sol.packing_origin];
    CHECK(per_packing[Method::Solver] == 4);
    CHECK(per_packing[Method::Greedy] == 4);
    CHECK(per_packing[Method::Random] == 4);
  }
}

TEST_CASE("nondominated sort agrees with the dominance-matrix oracle") {
  SUBCASE("hand cases") {
    Population pop(4);
    auto set = [&pop](std::size_t i, double f, double g) {
      pop[i].eval.tour_time = f;
      pop[i].eval.final_profit = g;
    };
    set(0, 1.0, 1.0);
    set(1, 2.0, 2.0);
    set(2, 1.0, 2.0);
    set(3, 2.0, 1.0);
    const auto fronts = nondominated_sort(pop);
    CHECK(pop[2].rank == 0);       // (1,2) dominates everything but trade-offs
    CHECK(pop[0].rank == 1);       // (1,1) dominated by (1,2)
    CHECK(pop[1].rank == 1);       // (2,2) dominated by (1,2)
    CHECK(pop[3].rank == 2);       // (2,1) dominated by (1,1), (2,2)
    CHECK(fronts[0].size() == 1);
  }
  SUBCASE("randomized against the oracle") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = static_cast<int>(rng.uniform_int(2, 16));
      Population pop(static_cast<std::size_t>(n));
      std::vector<ObjectivePoint> pts;
      for (auto& ind : pop) {
        ind.eval.tour_time = rng.uniform_real(0.0, 5.0);
        ind.eval.final_profit = rng.uniform_real(0.0, 5.0);
        pts.push_back(objective_point(ind));
      }
      nondominated_sort(pop);
      const auto expected = oracles::front_ranks(pts);
      for (int i = 0; i < n; ++i)
        CHECK(pop[static_cast<std::size_t>(i)].rank == expected[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("crowding distance marks extremes infinite") {
  Population pop(4);
  auto set = [&pop](std::size_t i, double f, double g) {
    pop[i].eval.tour_time = f;
    pop[i].eval.final_profit = g;
  };
  // A single trade-off front.
  set(0, 1.0, 1.0);
  set(1, 2.0, 3.0);
  set(2, 3.0, 4.0);
  set(3, 4.0, 6.0);
  const auto fronts = nondominated_sort(pop);
  REQUIRE(fronts[0].size() == 4);
  assign_crowding(pop, fronts[0]);
  CHECK(std::isinf(pop[0].crowding));
  CHECK(std::isinf(pop[3].crowding));
  CHECK(pop[1].crowding > 0.0);
  CHECK_FALSE(std::isinf(pop[1].crowding));
}

TEST_CASE("one generation keeps the population size and feasibility") {
  const TtpInstance inst = fixture(7);
  const EaConfig config = small_config();
  Rng rng(2);
  Population pop = initialize(StrategySpec::from_id("gg"), inst, config, rng);
  for (int g = 0; g < 10; ++g) {
    pop = step_generation(pop, inst, config, rng);
    check_population(inst, pop, config.pop_size);
  }
}

TEST_CASE("zero-rate operators leave the population unchanged") {
  const TtpInstance inst = fixture(9);
  EaConfig config = small_config();
  config.crossover_rate = 0.0;
  config.tour_swap_rate = 0.0;
  config.bitflip_rate = 0.0;
  Rng rng(4);
  Population pop = initialize(StrategySpec::from_id("gr"), inst, config, rng);
  GenotypeSet before;
  for (const Individual& ind : pop) before.insert(ind.sol);
  const Population next = step_generation(pop, inst, config, rng);
  REQUIRE(next.size() == pop.size());
  for (const Individual& ind : next) CHECK(before.contains(ind.sol));
}

TEST_CASE("elitism: the best-f and best-g parents never deteriorate") {
  const TtpInstance inst = fixture(11);
  const EaConfig config = small_config();
  Rng rng(6);
  Population pop = initialize(StrategySpec::from_id("rr"), inst, config, rng);
  for (int g = 0; g < 20; ++g) {
    double best_f = pop[0].eval.tour_time;
    double best_g = pop[0].eval.final_profit;
    for (const Individual& ind : pop) {
      best_f = std::min(best_f, ind.eval.tour_time);
      best_g = std::max(best_g, ind.eval.final_profit);
    }
    pop = step_generation(pop, inst, config, rng);
    double next_f = pop[0].eval.tour_time;
    double next_g = pop[0].eval.final_profit;
    for (const Individual& ind : pop) {
      next_f = std::min(next_f, ind.eval.tour_time);
      next_g = std::max(next_g, ind.eval.final_profit);
    }
    CHECK(next_f <= best_f + 1e-9);
    CHECK(next_g >= best_g - 1e-9);
  }
}

TEST_CASE("dominance truncation never keeps a solution dominated by a discarded one") {
  const TtpInstance inst = fixture(13);
  const EaConfig config = small_config();
  Rng rng(8);
  Population pop = initialize(StrategySpec::from_id("rr"), inst, config, rng);
  for (int g = 0; g < 5; ++g) {
    Population parents = pop;
    pop = step_generation(pop, inst, config, rng);
    // Any parent not kept must not dominate a kept member.
    GenotypeSet kept;
    for (const Individual& ind : pop) kept.insert(ind.sol);
    for (const Individual& parent : parents) {
      if (kept.contains(parent.sol)) continue;
      for (const Individual& survivor : pop)
        CHECK_FALSE(dominates(objective_point(parent), objective_point(survivor)));
    }
  }
}

TEST_CASE("mN response re-evaluates without changing membership") {
  const TtpInstance inst = fixture(15);
  const EaConfig config = small_config();
  Rng rng(10);
  Population pop = initialize(StrategySpec::from_id("mN"), inst, config, rng);

  // A Val-style rescale flips profits; membership must survive re-evaluation.
  std::vector<std::pair<int, double>> factors;
  for (int id = 1; id <= inst.n_items(); ++id) factors.emplace_back(id, 1.02);
  const TtpInstance changed = inst.rescaled(factors);

  const Population after =
      respond_to_change(StrategySpec::from_id("mN"), changed, pop, config, rng);
  REQUIRE(after.size() == pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    CHECK(after[i].sol == pop[i].sol);
    if (!after[i].sol.plan.picks.empty())
      CHECK(after[i].eval.final_profit > pop[i].eval.final_profit);
  }
}

TEST_CASE("responsive strategies merge new solutions with survivors") {
  const TtpInstance inst = fixture(17);
  const EaConfig config = small_config();
  Rng rng(12);
  Population pop = initialize(StrategySpec::from_id("pR"), inst, config, rng);
  for (int g = 0; g < 5; ++g) pop = step_generation(pop, inst, config, rng);

  ChangeEvent event;
  event.ava = {{1, 1}, {2, 3}};
  const TtpInstance changed = apply_change(inst, event);
  const Population after =
      respond_to_change(StrategySpec::from_id("pS"), changed, pop, config, rng);
  check_population(changed, after, config.pop_size);
  // The solver-seeded response must surface at least one solver-origin member.
  bool any_new = false;
  for (const Individual& ind : after)
    if (ind.sol.tour_origin == Method::Solver) any_new = true;
  CHECK(any_new);
}

TEST_CASE("re-evaluation under a Val change can flip dominance") {
  // Two solutions: A packs item 1 (light, low profit), B packs item 2
  // (heavy, high profit). A Val change that boosts item 1 and cuts item 2
  // reverses the profit order while tour times stay fixed.
  std::vector<City> cities{{1, 0, 0}, {2, 0, 10}, {3, 10, 0}};
  std::vector<Item> items{{1, 100.0, 2.0, 2}, {2, 110.0, 2.0, 3}};
  const TtpInstance inst =
      TtpInstance::create("flip", std::move(cities), std::move(items), 3.0);
  const Tour tour{{1, 2, 3}};
  const Evaluation a0 = evaluate(inst, tour, PackingPlan{{1}});
  const Evaluation b0 = evaluate(inst, tour, PackingPlan{{2}});
  CHECK(b0.final_profit > a0.final_profit);

  TtpInstance changed = inst;
  for (int k = 0; k < 10; ++k) {
    ChangeEvent event;
    event.change_factor = 0.02;
    event.val = {{1, +1}, {2, -1}};
    changed = apply_change(changed, event);
  }
  const Evaluation a1 = evaluate(changed, tour, PackingPlan{{1}});
  const Evaluation b1 = evaluate(changed, tour, PackingPlan{{2}});
  CHECK(a1.final_profit > b1.final_profit);
  CHECK(a1.tour_time == a0.tour_time);
}

TEST_CASE("dynamic runs have the promised record and snapshot shape") {
  const TtpInstance inst = fixture(19, 7, 8);
  EaConfig config = small_config();
  DynamicsConfig dyn = DynamicsConfig::defaults(DynamicsKind::Val);
  dyn.magnitude = 30.0;
  dyn.period = 10;
  dyn.n_changes = 3;
  const ChangeSchedule schedule = generate_schedule(inst, dyn, 77);

  Rng rng(14);
  const RunTrace trace =
      run_dynamic(inst, schedule, StrategySpec::from_id("mC"), config, rng);
  CHECK(trace.records.size() == 41);    // 10 * (3 + 1) generations + generation 0
  CHECK(trace.snapshots.size() == 4);   // n_changes + 1
  CHECK(trace.archive_violations == 0);
  CHECK(trace.final_population.size() == static_cast<std::size_t>(config.pop_size));
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    CHECK(trace.records[i].generation == static_cast<int>(i));
    CHECK(trace.records[i].interval == std::min(static_cast<int>(i) / 10, 3));
  }
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i)
    CHECK(trace.snapshots[i].interval == static_cast<int>(i));

  // Bit-identical repetition under the same seed.
  Rng rng2(14);
  const RunTrace again =
      run_dynamic(inst, schedule, StrategySpec::from_id("mC"), config, rng2);
  REQUIRE(again.records.size() == trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    CHECK(again.records[i].hypervolume == trace.records[i].hypervolume);
    CHECK(again.records[i].spread == trace.records[i].spread);
  }
}

TEST_CASE("mN runs keep membership across every change") {
  const TtpInstance inst = fixture(23, 6, 6);
  EaConfig config = small_config();
  DynamicsConfig dyn = DynamicsConfig::defaults(DynamicsKind::Ava);
  dyn.magnitude = 40.0;
  dyn.period = 5;
  dyn.n_changes = 2;
  const ChangeSchedule schedule = generate_schedule(inst, dyn, 3);
  Rng rng(16);
  const RunTrace trace =
      run_dynamic(inst, schedule, StrategySpec::from_id("mN"), config, rng);
  CHECK(trace.snapshots.size() == 3);
  CHECK(trace.archive_violations == 0);
}

TEST_CASE("tour conservation counts undirected adjacencies") {
  const Tour a{{1, 2, 3, 4, 5}};
  CHECK(tour_conservation(a, a) == doctest::Approx(100.0));
  const Tour reversed{{1, 5, 4, 3, 2}};
  CHECK(tour_conservation(a, reversed) == doctest::Approx(100.0));
  const Tour other{{1, 3, 5, 2, 4}};
  CHECK(tour_conservation(a, other) == doctest::Approx(0.0));
  const Tour partial{{1, 2, 3, 5, 4}};  // keeps 1-2, 2-3, 4-5 of five edges
  CHECK(tour_conservation(a, partial) == doctest::Approx(60.0));
}

TEST_CASE("packing conservation blends item and city overlap") {
  std::vector<City> cities{{1, 0, 0}, {2, 0, 10}, {3, 10, 0}, {4, 10, 10}};
  std::vector<Item> items{
      {1, 10, 2, 2}, {2, 10, 2, 2}, {3, 10, 2, 3}, {4, 10, 2, 3}, {5, 10, 2, 4}};
  const TtpInstance inst =
      TtpInstance::create("t", std::move(cities), std::move(items), 9.0);

  CHECK(packing_conservation(PackingPlan{{1, 3}}, PackingPlan{{1, 3}}, inst) ==
        doctest::Approx(100.0));
  // Different items from exactly the same cities: half conserved.
  CHECK(packing_conservation(PackingPlan{{1, 3}}, PackingPlan{{2, 4}}, inst) ==
        doctest::Approx(50.0));
  CHECK(packing_conservation(PackingPlan{}, PackingPlan{}, inst) == 100.0);
  CHECK(packing_conservation(PackingPlan{{1}}, PackingPlan{}, inst) == 0.0);
  // Disjoint items, disjoint cities.
  CHECK(packing_conservation(PackingPlan{{1, 2}}, PackingPlan{{5}}, inst) ==
        doctest::Approx(0.0));
}

TEST_SUITE_END();
