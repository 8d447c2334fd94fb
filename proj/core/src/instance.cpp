#include "dttp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dttp {

namespace {

bool is_finite(double v) { return std::isfinite(v); }

double euclid(const City& a, const City& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Ceiling with a snap to the nearest integer at 1e-12 relative tolerance,
/// clamped to >= 1 (carry times are always positive).
double decay_exponent(double carry_time, double drop_constant) {
  const double x = carry_time / drop_constant;
  const double nearest = std::nearbyint(x);
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  double k = std::abs(x - nearest) <= tol ? nearest : std::ceil(x);
  return std::max(k, 1.0);
}

}  // namespace

DistanceMatrix DistanceMatrix::compute(const std::vector<City>& cities) {
  DistanceMatrix m;
  m.n_ = static_cast<int>(cities.size());
  m.d_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
  for (int i = 0; i < m.n_; ++i) {
    for (int j = i + 1; j < m.n_; ++j) {
      const double d = euclid(cities[i], cities[j]);
      m.d_[static_cast<std::size_t>(i) * m.n_ + j] = d;
      m.d_[static_cast<std::size_t>(j) * m.n_ + i] = d;
    }
  }
  return m;
}

double DistanceMatrix::min_off_diagonal() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      best = std::min(best, d_[static_cast<std::size_t>(i) * n_ + j]);
  return best;
}

double DistanceMatrix::mean_off_diagonal() const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      sum += d_[static_cast<std::size_t>(i) * n_ + j];
  const double count = static_cast<double>(n_) * (n_ - 1) / 2.0;
  return sum / count;
}

void DistanceMatrix::update_city(const std::vector<City>& cities, int city_id) {
  const int k = city_id - 1;
  for (int j = 0; j < n_; ++j) {
    const double d = j == k ? 0.0 : euclid(cities[k], cities[j]);
    d_[static_cast<std::size_t>(k) * n_ + j] = d;
    d_[static_cast<std::size_t>(j) * n_ + k] = d;
  }
}

double compute_drop_constant(double min_distance, double min_profit,
                             double max_profit, double v_min, double drop_rate) {
  if (min_distance <= 0.0)
    throw ValidationError("duplicate city coordinates: shortest inter-city distance is zero");
  const double ratio = TtpInstance::kDropConstantR * min_profit / max_profit;
  if (ratio >= 1.0)
    throw ConfigError("r*l/u >= 1 makes the drop-constant logarithm non-negative");
  return std::log(drop_rate) * min_distance / (v_min * std::log(ratio));
}

TtpInstance TtpInstance::create(std::string name, std::vector<City> cities,
                                std::vector<Item> items, double capacity,
                                double v_min, double v_max, double drop_rate) {
  TtpInstance inst;
  const int n = static_cast<int>(cities.size());
  if (n < 3) throw ValidationError("instance needs at least 3 cities");
  std::sort(cities.begin(), cities.end(),
            [](const City& a, const City& b) { return a.id < b.id; });
  for (int i = 0; i < n; ++i) {
    const City& c = cities[i];
    if (c.id != i + 1)
      throw ValidationError("city ids must form the contiguous set 1..N");
    if (!is_finite(c.x) || !is_finite(c.y) || c.x < 0.0 || c.y < 0.0)
      throw ValidationError("city coordinates must be finite and non-negative");
  }

  if (items.empty()) throw ValidationError("instance needs at least one item");
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.id < b.id; });
  double weight_sum = 0.0;
  double min_profit = std::numeric_limits<double>::infinity();
  double max_profit = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    if (it.id != static_cast<int>(i) + 1)
      throw ValidationError("item ids must form the contiguous set 1..m");
    if (!is_finite(it.profit) || it.profit <= 0.0)
      throw ValidationError("item profit must be strictly positive and finite");
    if (!is_finite(it.weight) || it.weight <= 0.0)
      throw ValidationError("item weight must be strictly positive and finite");
    if (it.city < 1 || it.city > n)
      throw ValidationError("item assigned to unknown city " + std::to_string(it.city));
    if (it.city == 1)
      throw ValidationError("no item may start at city 1 (the tour start)");
    weight_sum += it.weight;
    min_profit = std::min(min_profit, it.profit);
    max_profit = std::max(max_profit, it.profit);
  }

  if (!(capacity > 0.0) || !is_finite(capacity))
    throw ValidationError("capacity must be positive and finite");
  if (!(capacity < weight_sum))
    throw ValidationError("capacity must be binding (W < total item weight)");
  if (!(v_min > 0.0 && v_min < v_max))
    throw ValidationError("speeds must satisfy 0 < v_min < v_max");
  if (!(drop_rate > 0.0 && drop_rate < 1.0))
    throw ValidationError("drop rate must lie in (0, 1)");

  inst.name_ = std::move(name);
  inst.cities_ = std::move(cities);
  inst.items_ = std::move(items);
  inst.capacity_ = capacity;
  inst.v_min_ = v_min;
  inst.v_max_ = v_max;
  inst.drop_rate_ = drop_rate;
  inst.dist_ = DistanceMatrix::compute(inst.cities_);
  inst.drop_constant_ = compute_drop_constant(inst.dist_.min_off_diagonal(),
                                              min_profit, max_profit, v_min, drop_rate);
  return inst;
}

double TtpInstance::total_item_weight() const {
  double sum = 0.0;
  for (const Item& it : items_) sum += it.weight;
  return sum;
}

TtpInstance TtpInstance::moved(
    const std::vector<std::tuple<int, double, double>>& city_xy) const {
  TtpInstance out = *this;
  for (const auto& [id, x, y] : city_xy) {
    if (id < 1 || id > n_cities())
      throw ValidationError("city id out of range: " + std::to_string(id));
    if (!is_finite(x) || !is_finite(y) || x < 0.0 || y < 0.0)
      throw ValidationError("moved city coordinates must be finite and non-negative");
    out.cities_[id - 1].x = x;
    out.cities_[id - 1].y = y;
  }
  for (const auto& [id, x, y] : city_xy) out.dist_.update_city(out.cities_, id);
  return out;
}

TtpInstance TtpInstance::reassigned(
    const std::vector<std::pair<int, int>>& item_city) const {
  TtpInstance out = *this;
  for (const auto& [id, city] : item_city) {
    if (id < 1 || id > n_items())
      throw ValidationError("item id out of range: " + std::to_string(id));
    if (city < 1 || city > n_cities())
      throw ValidationError("target city out of range: " + std::to_string(city));
    out.items_[id - 1].city = city;
  }
  return out;
}

TtpInstance TtpInstance::rescaled(
    const std::vector<std::pair<int, double>>& item_factor) const {
  TtpInstance out = *this;
  for (const auto& [id, factor] : item_factor) {
    if (id < 1 || id > n_items())
      throw ValidationError("item id out of range: " + std::to_string(id));
    const double p = out.items_[id - 1].profit * factor;
    if (!(p > 0.0) || !is_finite(p))
      throw ValidationError("profit update would make item " + std::to_string(id) +
                            " non-positive");
    out.items_[id - 1].profit = p;
  }
  return out;
}

double current_velocity(double current_weight, const TtpInstance& inst) {
  if (current_weight < 0.0)
    throw ValidationError("knapsack weight cannot be negative");
  if (current_weight > inst.capacity())
    throw ValidationError("knapsack weight exceeds capacity");
  return inst.max_speed() -
         current_weight * (inst.max_speed() - inst.min_speed()) / inst.capacity();
}

void validate_tour(const TtpInstance& inst, const Tour& tour) {
  const int n = inst.n_cities();
  if (static_cast<int>(tour.order.size()) != n)
    throw ValidationError("tour must visit every city exactly once");
  if (tour.order[0] != 1) throw ValidationError("tour must start at city 1");
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (int c : tour.order) {
    if (c < 1 || c > n || seen[c])
      throw ValidationError("tour is not a permutation of 1..N");
    seen[c] = 1;
  }
}

void validate_plan(const TtpInstance& inst, const PackingPlan& plan) {
  double weight = 0.0;
  int prev = 0;
  for (int id : plan.picks) {
    if (id < 1 || id > inst.n_items())
      throw ValidationError("packing plan references unknown item " + std::to_string(id));
    if (id <= prev)
      throw ValidationError("packing plan picks must be sorted and unique");
    prev = id;
    weight += inst.item(id).weight;
  }
  if (weight > inst.capacity())
    throw ValidationError("packing plan exceeds the knapsack capacity");
}

Evaluation evaluate(const TtpInstance& inst, const Tour& tour,
                    const PackingPlan& plan) {
  validate_tour(inst, tour);
  validate_plan(inst, plan);

  const int n = inst.n_cities();
  std::vector<double> pickup_weight(static_cast<std::size_t>(n) + 1, 0.0);
  for (int id : plan.picks) pickup_weight[inst.item(id).city] += inst.item(id).weight;

  std::vector<double> departure(static_cast<std::size_t>(n) + 1, 0.0);
  const DistanceMatrix& d = inst.distance();
  double t = 0.0;
  double weight = 0.0;
  for (int k = 0; k < n; ++k) {
    const int c = tour.order[k];
    const int next = tour.order[(k + 1) % n];
    departure[c] = t;
    weight += pickup_weight[c];
    t += d(c, next) / current_velocity(weight, inst);
  }

  double profit = 0.0;
  for (int id : plan.picks) {
    const Item& it = inst.item(id);
    const double carry = t - departure[it.city];
    profit += it.profit * std::pow(inst.drop_rate(),
                                   decay_exponent(carry, inst.drop_constant()));
  }
  return Evaluation{t, profit, weight};
}

PackingPlan kp_to_packing_plan(const std::vector<int>& selection,
                               const TtpInstance& inst) {
  PackingPlan plan;
  plan.picks = selection;
  std::sort(plan.picks.begin(), plan.picks.end());
  validate_plan(inst, plan);
  return plan;
}

}  // namespace dttp
