#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dttp/dynamics.hpp"
#include "dttp/instance.hpp"
#include "dttp/metrics.hpp"
#include "dttp/rng.hpp"
#include "dttp/solvers.hpp"

namespace dttp {

/// A population-composition recipe: one (tour method, packing method) cell
/// per construction route. Static combos (ss..rr) initialize a run; dynamic
/// strategies (pS..mN) additionally rebuild response populations after each
/// change. mN initializes like mC but never responds.
struct StrategySpec {
  std::string id;
  std::vector<std::pair<Method, Method>> cells;
  bool responds = true;

  static StrategySpec from_id(const std::string& id);
  /// The eight response strategies: pS pG pR mS mG mR mC mN.
  static const std::vector<std::string>& dynamic_ids();
  /// The nine static initialization combos: ss sg sr gs gg gr rs rg rr.
  static const std::vector<std::string>& static_ids();
};

struct EaConfig {
  int pop_size = 60;
  int generations_static = 1000;
  double crossover_rate = 0.9;
  double tour_swap_rate = 0.2;
  /// Per-item bitflip probability; negative means 1/m resolved per instance.
  double bitflip_rate = -1.0;
  int tournament_size = 2;
  int solver_passes = 1000;
};

void validate_config(const EaConfig& config);

struct Individual {
  Solution sol;
  Evaluation eval;
  int rank = 0;          // front index, 0 = non-dominated
  double crowding = 0.0;
};

using Population = std::vector<Individual>;

ObjectivePoint objective_point(const Individual& ind);
std::vector<ObjectivePoint> objective_points(const Population& pop);

/// Population of pop_size unique feasible solutions. Each strategy cell
/// receives an equal share (remainder to earlier cells); solver/greedy
/// cells expand a single constructed seed by perturbation, the pure-random
/// cell draws fully independent random solutions.
Population initialize(const StrategySpec& strategy, const TtpInstance& inst,
                      const EaConfig& config, Rng& rng);

/// Fast non-dominated sort; returns fronts of indices (front 0 first) and
/// writes rank into the population.
std::vector<std::vector<int>> nondominated_sort(Population& pop);

/// Standard cuboid crowding distance within one front; extremes infinite.
void assign_crowding(Population& pop, const std::vector<int>& front);

/// One NSGA-II generation: binary tournament on (rank, crowding), order
/// crossover on tours, one-point crossover on item masks with capacity
/// repair, swap/bitflip mutation, then (parents + offspring) deduplicated
/// by genotype and truncated to pop_size by rank then crowding.
Population step_generation(const Population& pop, const TtpInstance& inst,
                           const EaConfig& config, Rng& rng);

/// Re-evaluates survivors under the changed instance and, unless the
/// strategy is passive, merges a full-size freshly initialized response
/// population before environmental selection back to pop_size.
Population respond_to_change(const StrategySpec& strategy, const TtpInstance& inst,
                             const Population& pop, const EaConfig& config, Rng& rng);

struct GenRecord {
  int generation = 0;
  int interval = 0;
  double hypervolume = 0.0;
  double spread = 0.0;
  /// Hypervolume of the non-dominated archive accumulated since the
  /// interval start; non-decreasing within an interval.
  double archive_hv = 0.0;
};

struct IntervalSnapshot {
  int interval = 0;
  double hypervolume = 0.0;
  double spread = 0.0;
  Population population;
};

struct RunTrace {
  std::vector<GenRecord> records;        // one per generation, generation 0 included
  std::vector<IntervalSnapshot> snapshots;  // n_changes + 1 entries
  Population final_population;
  int archive_violations = 0;  // archive-HV decreases observed (expected 0)
};

/// Full dynamic run: initialize with the strategy, evolve period
/// generations per interval, and at each event generation snapshot the
/// pre-change population, apply the change and build the response
/// population (which is that generation's population update). Metrics are
/// recorded every generation against the interval's instance and the fixed
/// nadir of the base instance.
RunTrace run_dynamic(const TtpInstance& base, const ChangeSchedule& schedule,
                     const StrategySpec& strategy, const EaConfig& config, Rng& rng);

/// Percentage of the N undirected adjacent city pairs of `initial`
/// (closing edge included) that persist in `final`.
double tour_conservation(const Tour& initial, const Tour& final_tour);

/// 0.5 * item-id overlap% + 0.5 * collection-city multiset overlap%, each
/// overlap as |intersection| / max(|initial|, |final|). Both plans empty:
/// 100; exactly one empty: 0. Collection cities come from `inst`.
double packing_conservation(const PackingPlan& initial, const PackingPlan& final_plan,
                            const TtpInstance& inst);

/// Trace CSV rows: run id, strategy, schedule seed, generation, interval,
/// hypervolume, spread (header included).
void write_trace_csv(std::ostream& out, const RunTrace& trace, const std::string& run_id,
                     const std::string& strategy, std::uint64_t schedule_seed);
/// Snapshot CSV rows: run id, interval, end HV, end spread.
void write_snapshot_rows(std::ostream& out, const RunTrace& trace, const std::string& run_id);
extern const char* const kSnapshotCsvHeader;

}  // namespace dttp
