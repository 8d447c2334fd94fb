#pragma once

#include <span>
#include <string>
#include <vector>

#include "dttp/instance.hpp"

namespace dttp {

/// A point in objective space: minimize f (tour time), maximize g (profit).
struct ObjectivePoint {
  double f = 0.0;
  double g = 0.0;
};

/// Fixed hypervolume reference: (mean off-diagonal distance x N, 0).
/// Derived once from the base instance and shared by every dynamic interval
/// and strategy, so end-of-interval values are comparable.
struct NadirPoint {
  double tour_bound = 0.0;
  double profit_bound = 0.0;
};

NadirPoint nadir(const TtpInstance& inst);

/// a dominates b iff f_a <= f_b and g_a >= g_b with at least one strict.
bool dominates(const ObjectivePoint& a, const ObjectivePoint& b);

/// Non-dominated subset with exact duplicates removed.
std::vector<ObjectivePoint> nondominated_points(std::span<const ObjectivePoint> points);

/// Staircase area between the non-dominated subset and the nadir. Only
/// points strictly dominating the nadir (f < tour_bound, g > profit_bound)
/// contribute; a front with none scores exactly 0.
double hypervolume(std::span<const ObjectivePoint> points, const NadirPoint& nadir);

/// Diagonal of the objective-space bounding box of the non-dominated
/// subset (maximum spread, two objectives, unnormalized). Empty or single
/// point: 0.
double max_spread(std::span<const ObjectivePoint> points);

/// One end-of-interval measurement of one run.
struct SnapshotValue {
  std::string strategy;
  int schedule = 0;  // dynamic-instance (schedule) index
  int repeat = 0;
  int interval = 0;  // 0 = the interval before the first change
  double hv = 0.0;
  double spread = 0.0;
};

struct RankRow {
  std::string strategy;
  int interval = 0;
  std::string metric;  // "hv" or "spread"
  double median_rank = 0.0;
};

struct RankTable {
  std::vector<RankRow> rows;
};

/// End-of-interval rank aggregation: mean across repeats per
/// (strategy, schedule, interval), rank strategies within each
/// (schedule, interval) with 1 = highest value and ties averaged, then the
/// median of ranks across schedules. The snapshot grid must be complete;
/// missing or duplicate cells raise a ValidationError (no imputation).
RankTable rank_strategies(std::span<const SnapshotValue> snapshots);

}  // namespace dttp
