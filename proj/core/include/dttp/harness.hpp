#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dttp/dynamics.hpp"
#include "dttp/evolve.hpp"
#include "dttp/instance.hpp"

namespace dttp {

/// Coordinate rows "id x y", either from a file or one of the built-in
/// fixture names ("city52").
std::vector<City> load_coords(const std::string& source);
const std::vector<City>& builtin_city52();

struct InstanceSpec {
  std::string tsp_source = "city52";
  char kp_type = 'A';  // A: 1 item/city, B: 5, C: 10
  std::uint64_t seed = 0;
};

/// Builds a TTP instance from a coordinate source:
///   A: w ~ U{1..1000},       p = w + 100       (strongly correlated), W = 3/11 * sum(w)
///   B: w ~ U{1000..1010},    p ~ U{1..1000}    (similar weights),     W = 6/11 * sum(w)
///   C: w ~ U{1..1000},       p ~ U{1..1000}    (uncorrelated),        W = 9/11 * sum(w)
/// City 1 holds no items; draws run city by city in id order (w before p).
TtpInstance generate_instance(const InstanceSpec& spec);

struct ExperimentPlan {
  InstanceSpec instance;
  DynamicsConfig dynamics;
  int n_schedules = 10;
  int n_repeats = 30;
  std::vector<std::string> strategies;  // empty = all eight response strategies
  std::uint64_t master_seed = 0;
  std::string out_dir;
  EaConfig ea;
};

ExperimentPlan load_plan(const std::filesystem::path& path);
void save_plan(const ExperimentPlan& plan, const std::filesystem::path& path);

/// Derived seeds; pure functions of the master seed and grid coordinates.
std::uint64_t schedule_seed(const ExperimentPlan& plan, int schedule_idx);
std::uint64_t run_seed(const ExperimentPlan& plan, int schedule_idx, int repeat_idx,
                       const std::string& strategy);

std::string run_id(const std::string& strategy, int schedule_idx, int repeat_idx);
/// Inverse of run_id; used by the rank subcommand on snapshot CSVs.
void parse_run_id(const std::string& id, std::string& strategy, int& schedule_idx,
                  int& repeat_idx);

struct ExperimentResult {
  std::filesystem::path out_dir;
  std::vector<SnapshotValue> snapshots;
  bool ranked = false;
  int archive_violations = 0;
  std::vector<std::string> failed_cells;
};

/// Runs the full strategy x schedule x repeat grid against shared schedule
/// files and writes instance.ttp, schedules/, traces/, snapshots.csv,
/// profiles.csv, ranks.csv and manifest.json under plan.out_dir.
/// Re-running an identical plan reproduces every artifact byte for byte.
/// threads = 0 uses the hardware concurrency.
ExperimentResult run_experiment(const ExperimentPlan& plan, int threads = 0);

struct StaticRunResult {
  std::string combo;
  Solution reference_seed;  // first constructed member of the combo's cell
  Population final_population;
  std::vector<double> tour_conservation_pct;     // per final member
  std::vector<double> packing_conservation_pct;  // per final member
};

/// Static study: initialize with one of the nine combos, evolve
/// generations_static generations without changes, and measure per-solution
/// conservation against the combo's seed components.
StaticRunResult run_static(const TtpInstance& inst, const std::string& combo,
                           const EaConfig& config, std::uint64_t seed);

void write_static_csv(std::ostream& out, const StaticRunResult& result);

/// Snapshot CSV as emitted by run_experiment (run_id rows); input format of
/// rank_strategies-based ranking from files.
std::vector<SnapshotValue> read_snapshot_csv(const std::filesystem::path& path);
void write_rank_csv(std::ostream& out, const RankTable& table);

/// FNV-1a 64 digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace dttp
