#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "dttp/instance.hpp"
#include "dttp/rng.hpp"

namespace dttp {

/// How a solution component was constructed.
enum class Method { Solver, Greedy, Random };

char method_code(Method m);
Method method_from_code(char c);

/// A candidate TTP solution: tour plus packing plan, tagged with the
/// construction method of each component. Tags never influence selection;
/// they exist for conservation studies and population-composition checks.
/// Equality and hashing consider the genotype only (tour order and picks).
struct Solution {
  Tour tour;
  PackingPlan plan;
  Method tour_origin = Method::Random;
  Method packing_origin = Method::Random;

  bool operator==(const Solution& other) const {
    return tour.order == other.tour.order && plan.picks == other.plan.picks;
  }
};

struct SolutionHash {
  std::size_t operator()(const Solution& s) const;
};

using GenotypeSet = std::unordered_set<Solution, SolutionHash>;

/// Plain Euclidean cycle length (no knapsack effects).
double tour_length(const TtpInstance& inst, const Tour& tour);

/// Nearest-neighbour construction from city 1; distance ties break to the
/// lower city index. Deterministic.
Tour greedy_tour(const TtpInstance& inst);

/// Greedy seed improved by first-improvement 2-opt and Or-opt (segment
/// lengths 1-3) passes, scanned in fixed index order, until a full pass
/// finds no improving move or `max_passes` is exhausted. Never longer than
/// the greedy tour.
Tour solver_tour(const TtpInstance& inst, int max_passes = 1000);

/// Exact 0/1 knapsack over integral weights. Throws DpBudgetError when
/// weights are not integral or the table would exceed `cell_budget` cells;
/// callers fall back to greedy_knapsack.
std::vector<int> dp_knapsack(std::span<const Item> items, double capacity,
                             std::uint64_t cell_budget = 100'000'000);
std::vector<int> dp_knapsack(const TtpInstance& inst);

/// Scan by descending profit/weight ratio (ties: lower item id) taking
/// every item that still fits.
std::vector<int> greedy_knapsack(std::span<const Item> items, double capacity);
std::vector<int> greedy_knapsack(const TtpInstance& inst);

/// Uniform random permutation of {2..N} appended to city 1.
Tour random_tour(const TtpInstance& inst, Rng& rng);

/// Scans a uniform random item permutation and stops at the first item that
/// would exceed the capacity (truncation, not skip-and-continue).
std::vector<int> random_packing(const TtpInstance& inst, Rng& rng);

/// Builds one component by the given method. Solver packing falls back to
/// the greedy selection when the exact DP is over budget.
Tour make_tour(Method method, const TtpInstance& inst, Rng& rng,
               int solver_passes = 1000);
std::vector<int> make_selection(Method method, const TtpInstance& inst, Rng& rng);

/// Swap the cities at two random positions in [1, N-1].
void swap_mutation(Tour& tour, Rng& rng);

/// Item-mask helpers shared by the mutation/crossover operators.
std::vector<std::uint8_t> plan_to_mask(const PackingPlan& plan, int n_items);
PackingPlan mask_to_plan(const std::vector<std::uint8_t>& mask);
/// While overweight, drops the picked item with the lowest profit/weight
/// ratio (ties: higher id).
void repair_capacity(std::vector<std::uint8_t>& mask, const TtpInstance& inst);

/// The unmodified base plus perturbed variants: each variant repeats single
/// mutations (tour swap or one-item bitflip with capacity repair) on a copy
/// of the base until it differs from every member so far. Exactly
/// `pop_size` unique feasible solutions. `exclude`, when given, is extended
/// with the emitted genotypes and pre-seeds the uniqueness check.
std::vector<Solution> expand_to_population(const Solution& base, int pop_size,
                                           const TtpInstance& inst, Rng& rng,
                                           GenotypeSet* exclude = nullptr);

}  // namespace dttp
