#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dttp/errors.hpp"

namespace dttp {

struct City {
  int id = 0;  // 1-based, contiguous
  double x = 0.0;
  double y = 0.0;
};

struct Item {
  int id = 0;  // 1-based, contiguous
  double profit = 0.0;
  double weight = 0.0;
  int city = 0;  // collection city (the availability map)
};

/// Full symmetric Euclidean distance matrix, 1-based indexing.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  static DistanceMatrix compute(const std::vector<City>& cities);

  double operator()(int i, int j) const { return d_[(i - 1) * n_ + (j - 1)]; }
  int size() const { return n_; }

  double min_off_diagonal() const;
  double mean_off_diagonal() const;

  /// Recomputes only the row and column of `city_id` against `cities`.
  void update_city(const std::vector<City>& cities, int city_id);

 private:
  int n_ = 0;
  std::vector<double> d_;
};

/// City permutation; order[0] is always city 1.
struct Tour {
  std::vector<int> order;
};

/// Selected item ids, kept sorted ascending. The collection city of each
/// pick is the item's current city in the instance evaluating the plan.
struct PackingPlan {
  std::vector<int> picks;
};

struct Evaluation {
  double tour_time = 0.0;     // f: total travel time including the closing leg
  double final_profit = 0.0;  // g: decayed value of the picks at tour end
  double knapsack_weight = 0.0;
};

/// Immutable problem instance. Dynamic changes produce new values via the
/// moved/reassigned/rescaled helpers; the base constants (capacity, speeds,
/// drop rate and drop constant) are never recomputed by those helpers.
class TtpInstance {
 public:
  static constexpr double kDefaultMinSpeed = 0.1;
  static constexpr double kDefaultMaxSpeed = 1.0;
  static constexpr double kDefaultDropRate = 0.9;
  static constexpr double kDropConstantR = 0.45;

  /// Validates every creation-time invariant (contiguous ids, finite
  /// non-negative coordinates, positive item values, no item at city 1,
  /// binding capacity, distinct city coordinates) and derives the distance
  /// matrix and drop constant.
  static TtpInstance create(std::string name, std::vector<City> cities,
                            std::vector<Item> items, double capacity,
                            double v_min = kDefaultMinSpeed,
                            double v_max = kDefaultMaxSpeed,
                            double drop_rate = kDefaultDropRate);

  const std::string& name() const { return name_; }
  const std::vector<City>& cities() const { return cities_; }
  const std::vector<Item>& items() const { return items_; }
  int n_cities() const { return static_cast<int>(cities_.size()); }
  int n_items() const { return static_cast<int>(items_.size()); }
  double capacity() const { return capacity_; }
  double min_speed() const { return v_min_; }
  double max_speed() const { return v_max_; }
  double drop_rate() const { return drop_rate_; }
  double drop_constant() const { return drop_constant_; }
  const DistanceMatrix& distance() const { return dist_; }

  const City& city(int id) const { return cities_[id - 1]; }
  const Item& item(int id) const { return items_[id - 1]; }
  double total_item_weight() const;

  /// Copy with the listed cities at new coordinates; only the affected
  /// distance rows/columns are recomputed. Coordinates must be finite and
  /// non-negative.
  TtpInstance moved(const std::vector<std::tuple<int, double, double>>& city_xy) const;
  /// Copy with the listed items reassigned to new cities (city 1 allowed,
  /// so the creation-time "city 1 holds no items" invariant is relaxed here).
  TtpInstance reassigned(const std::vector<std::pair<int, int>>& item_city) const;
  /// Copy with the listed items' profits multiplied by per-item factors.
  /// A non-positive resulting profit is an error, never clamped.
  TtpInstance rescaled(const std::vector<std::pair<int, double>>& item_factor) const;

 private:
  TtpInstance() = default;

  std::string name_;
  std::vector<City> cities_;
  std::vector<Item> items_;
  double capacity_ = 0.0;
  double v_min_ = kDefaultMinSpeed;
  double v_max_ = kDefaultMaxSpeed;
  double drop_rate_ = kDefaultDropRate;
  double drop_constant_ = 0.0;
  DistanceMatrix dist_;
};

/// C = ln(Dr) * E_t / (v_min * ln(r*l/u)) with r = 0.45.
/// Requires r*l/u < 1 so both logarithms are negative and C > 0.
double compute_drop_constant(double min_distance, double min_profit,
                             double max_profit, double v_min, double drop_rate);

/// v_c = v_max - W_c * (v_max - v_min) / W; linear and decreasing in W_c.
/// W_c > W is an infeasibility error.
double current_velocity(double current_weight, const TtpInstance& inst);

/// Simulates the tour leg by leg, including the closing leg back to city 1.
/// Items are loaded before departing their collection city, so an item's
/// weight slows every later leg and its carry time T_i runs from that
/// departure to tour end. f is the total time; g is
/// sum_i p_i * Dr^ceil(T_i / C), where near-integer T_i/C snaps to the
/// integer (1e-12 relative) before the ceiling and the exponent is at
/// least 1 since every carry time is positive.
Evaluation evaluate(const TtpInstance& inst, const Tour& tour,
                    const PackingPlan& plan);

void validate_tour(const TtpInstance& inst, const Tour& tour);
void validate_plan(const TtpInstance& inst, const PackingPlan& plan);

/// Knapsack selection -> packing plan collecting each item at its current city.
PackingPlan kp_to_packing_plan(const std::vector<int>& selection,
                               const TtpInstance& inst);

/// Competition-style text format; see README for the exact layout.
TtpInstance read_instance(const std::filesystem::path& path);
void write_instance(const TtpInstance& inst, const std::filesystem::path& path);
TtpInstance parse_instance(std::istream& in);
void print_instance(const TtpInstance& inst, std::ostream& out);

}  // namespace dttp
