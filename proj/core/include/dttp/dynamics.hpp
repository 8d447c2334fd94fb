#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dttp/instance.hpp"
#include "dttp/rng.hpp"

namespace dttp {

enum class DynamicsKind { Loc, Ava, Val };

std::string to_string(DynamicsKind kind);
DynamicsKind dynamics_kind_from(const std::string& s);

struct DynamicsConfig {
  DynamicsKind kind = DynamicsKind::Loc;
  /// Loc: number of cities moved per event. Ava/Val: percentage of items
  /// touched per event (rounded half-to-even to a count).
  double magnitude = 2.0;
  double change_factor = 0.02;  // Val only
  int period = 200;             // generations between change events
  int n_changes = 5;

  static DynamicsConfig defaults(DynamicsKind kind);
  /// Canonical text form hashed into the generator seed, so a schedule is a
  /// pure function of (instance, config, seed).
  std::string canonical_string() const;
};

void validate_config(const DynamicsConfig& config, const TtpInstance& inst);

/// Number of targets per event; ConfigError if a percentage rounds to zero.
int magnitude_count(const DynamicsConfig& config, const TtpInstance& inst);

struct LocMove {
  int city = 0;
  double x = 0.0;
  double y = 0.0;
};
struct AvaMove {
  int item = 0;
  int city = 0;
};
struct ValMove {
  int item = 0;
  int sign = 0;  // -1 or +1
};

/// One dynamic change; only the vector matching the schedule kind is
/// populated. All random draws are pre-expanded so replaying an event never
/// needs the generator. Val events carry the change factor of the schedule
/// they belong to, so an event is self-contained under apply_change.
struct ChangeEvent {
  int at_generation = 0;
  double change_factor = 0.0;
  std::vector<LocMove> loc;
  std::vector<AvaMove> ava;
  std::vector<ValMove> val;
};

struct ChangeSchedule {
  DynamicsKind kind = DynamicsKind::Loc;
  std::uint64_t seed = 0;
  DynamicsConfig config;
  std::vector<ChangeEvent> events;
};

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};
struct FeasibleRegion {
  AxisRange x;
  AxisRange y;
};

/// Per axis with initial range [lo, hi] of length L, the translation region
/// is [max(0, lo - 0.05 L), hi + 0.05 L]; a degenerate axis stays a point.
FeasibleRegion feasible_region(const TtpInstance& inst);

/// Deterministic: the generator is seeded only by (seed, config digest) and
/// draws are consumed in a fixed order (targets first, then payload values
/// in id-sorted target order; Loc payloads draw x before y).
ChangeSchedule generate_schedule(const TtpInstance& inst,
                                 const DynamicsConfig& config,
                                 std::uint64_t seed);

/// New instance value with the event applied; the input is untouched.
/// Capacity, speeds, drop rate and drop constant never change.
TtpInstance apply_change(const TtpInstance& inst, const ChangeEvent& event);

/// Structural check of a loaded schedule against an instance (id ranges,
/// Loc payload inside the instance's feasible region, event ordering).
void validate_schedule(const ChangeSchedule& schedule, const TtpInstance& inst);

void save_schedule(const ChangeSchedule& schedule, const std::filesystem::path& path);
ChangeSchedule load_schedule(const std::filesystem::path& path);
void print_schedule(const ChangeSchedule& schedule, std::ostream& out);
ChangeSchedule parse_schedule(std::istream& in);

}  // namespace dttp
