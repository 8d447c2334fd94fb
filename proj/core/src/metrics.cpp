#include "dttp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dttp/errors.hpp"

namespace dttp {

NadirPoint nadir(const TtpInstance& inst) {
  return NadirPoint{inst.distance().mean_off_diagonal() * inst.n_cities(), 0.0};
}

bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) {
  return a.f <= b.f && a.g >= b.g && (a.f < b.f || a.g > b.g);
}

std::vector<ObjectivePoint> nondominated_points(std::span<const ObjectivePoint> points) {
  std::vector<ObjectivePoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (j == i) continue;
      if (dominates(points[j], points[i])) keep = false;
      // Exact duplicates: keep only the first occurrence.
      if (j < i && points[j].f == points[i].f && points[j].g == points[i].g) keep = false;
    }
    if (keep) out.push_back(points[i]);
  }
  return out;
}

double hypervolume(std::span<const ObjectivePoint> points, const NadirPoint& nadir) {
  std::vector<ObjectivePoint> inside;
  for (const ObjectivePoint& p : points)
    if (p.f < nadir.tour_bound && p.g > nadir.profit_bound) inside.push_back(p);
  if (inside.empty()) return 0.0;

  std::vector<ObjectivePoint> front = nondominated_points(inside);
  // Ascending f; for a trade-off front g then ascends as well.
  std::sort(front.begin(), front.end(),
            [](const ObjectivePoint& a, const ObjectivePoint& b) { return a.f < b.f; });
  double area = 0.0;
  double prev_g = nadir.profit_bound;
  for (const ObjectivePoint& p : front) {
    area += (nadir.tour_bound - p.f) * (p.g - prev_g);
    prev_g = p.g;
  }
  return area;
}

double max_spread(std::span<const ObjectivePoint> points) {
  if (points.empty()) return 0.0;
  const std::vector<ObjectivePoint> front = nondominated_points(points);
  double f_lo = front[0].f, f_hi = front[0].f;
  double g_lo = front[0].g, g_hi = front[0].g;
  for (const ObjectivePoint& p : front) {
    f_lo = std::min(f_lo, p.f);
    f_hi = std::max(f_hi, p.f);
    g_lo = std::min(g_lo, p.g);
    g_hi = std::max(g_hi, p.g);
  }
  return std::hypot(f_hi - f_lo, g_hi - g_lo);
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Ranks with 1 = highest value; exact ties share the averaged rank.
std::vector<double> rank_descending(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&values](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

RankTable rank_strategies(std::span<const SnapshotValue> snapshots) {
  if (snapshots.empty()) throw ValidationError("no snapshot values to rank");

  std::vector<std::string> strategies;  // first-appearance order
  std::set<int> schedules, repeats, intervals;
  for (const SnapshotValue& s : snapshots) {
    if (std::find(strategies.begin(), strategies.end(), s.strategy) == strategies.end())
      strategies.push_back(s.strategy);
    schedules.insert(s.schedule);
    repeats.insert(s.repeat);
    intervals.insert(s.interval);
  }

  // Complete factorial grid, one record per cell.
  using Cell = std::tuple<std::string, int, int, int>;
  std::map<Cell, std::pair<double, double>> sums;  // (hv, spread) accumulators
  std::map<Cell, int> counts;
  for (const SnapshotValue& s : snapshots) {
    const Cell cell{s.strategy, s.schedule, s.repeat, s.interval};
    if (++counts[cell] > 1)
      throw ValidationError("duplicate snapshot cell for strategy " + s.strategy);
    sums[cell] = {s.hv, s.spread};
  }
  const std::size_t expected =
      strategies.size() * schedules.size() * repeats.size() * intervals.size();
  if (counts.size() != expected)
    throw ValidationError("incomplete snapshot grid: " + std::to_string(counts.size()) +
                          " cells, expected " + std::to_string(expected));

  RankTable table;
  for (const std::string& metric : {std::string("hv"), std::string("spread")}) {
    // ranks[strategy][interval] -> one rank per schedule
    std::map<std::pair<std::string, int>, std::vector<double>> rank_lists;
    for (int schedule : schedules) {
      for (int interval : intervals) {
        std::vector<double> means;
        means.reserve(strategies.size());
        for (const std::string& strategy : strategies) {
          double sum = 0.0;
          for (int repeat : repeats) {
            const auto& v = sums.at(Cell{strategy, schedule, repeat, interval});
            sum += metric == "hv" ? v.first : v.second;
          }
          means.push_back(sum / static_cast<double>(repeats.size()));
        }
        const std::vector<double> ranks = rank_descending(means);
        for (std::size_t i = 0; i < strategies.size(); ++i)
          rank_lists[{strategies[i], interval}].push_back(ranks[i]);
      }
    }
    for (const std::string& strategy : strategies)
      for (int interval : intervals)
        table.rows.push_back(RankRow{strategy, interval, metric,
                                     median(rank_lists.at({strategy, interval}))});
  }
  return table;
}

}  // namespace dttp
