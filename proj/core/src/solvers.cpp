#include "dttp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dttp {

namespace {

constexpr double kImprovementEps = 1e-10;

bool integral_within(double v, double tol) {
  return std::abs(v - std::nearbyint(v)) <= tol;
}

}  // namespace

char method_code(Method m) {
  switch (m) {
    case Method::Solver: return 's';
    case Method::Greedy: return 'g';
    case Method::Random: return 'r';
  }
  throw ConfigError("unreachable method");
}

Method method_from_code(char c) {
  switch (c) {
    case 's': return Method::Solver;
    case 'g': return Method::Greedy;
    case 'r': return Method::Random;
  }
  throw ConfigError(std::string("unknown method code '") + c + "' (expected s|g|r)");
}

std::size_t SolutionHash::operator()(const Solution& s) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto absorb = [&h](int v) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
    h *= 0x100000001b3ull;
  };
  for (int c : s.tour.order) absorb(c);
  absorb(-1);  // separator
  for (int id : s.plan.picks) absorb(id);
  return static_cast<std::size_t>(h);
}

double tour_length(const TtpInstance& inst, const Tour& tour) {
  const DistanceMatrix& d = inst.distance();
  const int n = inst.n_cities();
  double len = 0.0;
  for (int k = 0; k < n; ++k) len += d(tour.order[k], tour.order[(k + 1) % n]);
  return len;
}

Tour greedy_tour(const TtpInstance& inst) {
  const int n = inst.n_cities();
  const DistanceMatrix& d = inst.distance();
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  Tour tour;
  tour.order.reserve(n);
  tour.order.push_back(1);
  used[1] = 1;
  int current = 1;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_d = 0.0;
    for (int c = 1; c <= n; ++c) {
      if (used[c]) continue;
      const double dist = d(current, c);
      if (best == -1 || dist < best_d) {  // ties keep the lower index
        best = c;
        best_d = dist;
      }
    }
    tour.order.push_back(best);
    used[best] = 1;
    current = best;
  }
  return tour;
}

namespace {

/// One first-improvement 2-opt sweep; segment [i..j] excludes position 0 so
/// city 1 stays put, which still covers every cycle 2-opt move (reverse the
/// half not containing city 1).
bool two_opt_pass(std::vector<int>& o, const DistanceMatrix& d) {
  const int n = static_cast<int>(o.size());
  bool improved = false;
  for (int i = 1; i + 1 < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int a = o[i - 1], b = o[i], c = o[j], e = o[(j + 1) % n];
      const double delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
      if (delta < -kImprovementEps) {
        std::reverse(o.begin() + i, o.begin() + j + 1);
        improved = true;
      }
    }
  }
  return improved;
}

/// First-improvement Or-opt sweep: relocate segments of length 1-3 (both
/// orientations), city 1 fixed.
bool or_opt_pass(std::vector<int>& o, const DistanceMatrix& d) {
  const int n = static_cast<int>(o.size());
  bool improved = false;
  for (int len = 1; len <= 3; ++len) {
    if (n - len < 3) continue;  // keep at least city 1 plus two others outside
    for (int i = 1; i + len <= n; ++i) {
      const int prev = o[i - 1];
      const int s0 = o[i];
      const int s1 = o[i + len - 1];
      const int next = o[(i + len) % n];
      const double removal_gain = d(prev, s0) + d(s1, next) - d(prev, next);
      if (removal_gain <= kImprovementEps) continue;
      // Candidate insertion edges (a,b) over the tour with the segment
      // removed, scanned in index order.
      std::vector<int> rest;
      rest.reserve(n - len);
      for (int k = 0; k < n; ++k)
        if (k < i || k >= i + len) rest.push_back(o[k]);
      const int m = static_cast<int>(rest.size());
      bool applied = false;
      for (int k = 0; k < m && !applied; ++k) {
        const int a = rest[k], b = rest[(k + 1) % m];
        for (int rev = 0; rev < 2 && !applied; ++rev) {
          const int head = rev ? s1 : s0;
          const int tail = rev ? s0 : s1;
          const double insertion_cost = d(a, head) + d(tail, b) - d(a, b);
          if (insertion_cost < removal_gain - kImprovementEps) {
            std::vector<int> seg(o.begin() + i, o.begin() + i + len);
            if (rev) std::reverse(seg.begin(), seg.end());
            std::vector<int> next_order;
            next_order.reserve(n);
            for (int t = 0; t <= k; ++t) next_order.push_back(rest[t]);
            next_order.insert(next_order.end(), seg.begin(), seg.end());
            for (int t = k + 1; t < m; ++t) next_order.push_back(rest[t]);
            // Rotate city 1 back to the front if the insertion moved it.
            const auto pos = std::find(next_order.begin(), next_order.end(), 1);
            std::rotate(next_order.begin(), pos, next_order.end());
            o = std::move(next_order);
            improved = true;
            applied = true;
          }
        }
      }
      if (applied) break;  // indices are stale; restart this segment length
    }
  }
  return improved;
}

}  // namespace

Tour solver_tour(const TtpInstance& inst, int max_passes) {
  Tour tour = greedy_tour(inst);
  const DistanceMatrix& d = inst.distance();
  for (int pass = 0; pass < max_passes; ++pass) {
    bool improved = two_opt_pass(tour.order, d);
    improved = or_opt_pass(tour.order, d) || improved;
    if (!improved) break;
  }
  return tour;
}

std::vector<int> dp_knapsack(std::span<const Item> items, double capacity,
                             std::uint64_t cell_budget) {
  const int m = static_cast<int>(items.size());
  for (const Item& it : items)
    if (!integral_within(it.weight, 1e-9))
      throw DpBudgetError("dp_knapsack requires integral item weights");
  const auto cap = static_cast<std::int64_t>(std::floor(capacity + 1e-9));
  if (cap < 0) throw ValidationError("negative capacity");
  const std::uint64_t cells =
      static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(cap + 1);
  if (cells > cell_budget)
    throw DpBudgetError("knapsack too large for DP: " + std::to_string(cells) +
                        " cells exceed the budget of " + std::to_string(cell_budget));

  std::vector<double> best(static_cast<std::size_t>(cap) + 1, 0.0);
  std::vector<std::uint8_t> take(cells, 0);
  for (int i = 0; i < m; ++i) {
    const auto w = static_cast<std::int64_t>(std::nearbyint(items[i].weight));
    const double p = items[i].profit;
    std::uint8_t* row = take.data() + static_cast<std::uint64_t>(i) * (cap + 1);
    for (std::int64_t c = cap; c >= w; --c) {
      const double with = best[static_cast<std::size_t>(c - w)] + p;
      if (with > best[static_cast<std::size_t>(c)]) {
        best[static_cast<std::size_t>(c)] = with;
        row[c] = 1;
      }
    }
  }

  std::vector<int> picks;
  std::int64_t c = cap;
  for (int i = m - 1; i >= 0; --i) {
    if (take[static_cast<std::uint64_t>(i) * (cap + 1) + c]) {
      picks.push_back(items[i].id);
      c -= static_cast<std::int64_t>(std::nearbyint(items[i].weight));
    }
  }
  std::sort(picks.begin(), picks.end());
  return picks;
}

std::vector<int> dp_knapsack(const TtpInstance& inst) {
  return dp_knapsack(std::span<const Item>(inst.items()), inst.capacity());
}

std::vector<int> greedy_knapsack(std::span<const Item> items, double capacity) {
  std::vector<int> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&items](int a, int b) {
    const double ra = items[a].profit / items[a].weight;
    const double rb = items[b].profit / items[b].weight;
    if (ra != rb) return ra > rb;
    return items[a].id < items[b].id;
  });
  std::vector<int> picks;
  double remaining = capacity;
  for (int i : idx) {
    if (items[i].weight <= remaining) {
      picks.push_back(items[i].id);
      remaining -= items[i].weight;
    }
  }
  std::sort(picks.begin(), picks.end());
  return picks;
}

std::vector<int> greedy_knapsack(const TtpInstance& inst) {
  return greedy_knapsack(std::span<const Item>(inst.items()), inst.capacity());
}

Tour random_tour(const TtpInstance& inst, Rng& rng) {
  const int n = inst.n_cities();
  Tour tour;
  tour.order.resize(static_cast<std::size_t>(n));
  tour.order[0] = 1;
  std::iota(tour.order.begin() + 1, tour.order.end(), 2);
  // Fisher-Yates over positions 1..n-1.
  for (int i = n - 1; i > 1; --i) {
    const auto j = static_cast<int>(rng.uniform_int(1, i));
    std::swap(tour.order[i], tour.order[j]);
  }
  return tour;
}

std::vector<int> random_packing(const TtpInstance& inst, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(inst.n_items()));
  std::iota(perm.begin(), perm.end(), 1);
  rng.shuffle(perm);
  std::vector<int> picks;
  double weight = 0.0;
  for (int id : perm) {
    if (weight + inst.item(id).weight > inst.capacity()) break;
    weight += inst.item(id).weight;
    picks.push_back(id);
  }
  std::sort(picks.begin(), picks.end());
  return picks;
}

Tour make_tour(Method method, const TtpInstance& inst, Rng& rng, int solver_passes) {
  switch (method) {
    case Method::Solver: return solver_tour(inst, solver_passes);
    case Method::Greedy: return greedy_tour(inst);
    case Method::Random: return random_tour(inst, rng);
  }
  throw ConfigError("unreachable method");
}

std::vector<int> make_selection(Method method, const TtpInstance& inst, Rng& rng) {
  switch (method) {
    case Method::Solver:
      try {
        return dp_knapsack(inst);
      } catch (const DpBudgetError&) {
        return greedy_knapsack(inst);
      }
    case Method::Greedy: return greedy_knapsack(inst);
    case Method::Random: return random_packing(inst, rng);
  }
  throw ConfigError("unreachable method");
}

void swap_mutation(Tour& tour, Rng& rng) {
  const int n = static_cast<int>(tour.order.size());
  const auto i = static_cast<int>(rng.uniform_int(1, n - 1));
  auto j = static_cast<int>(rng.uniform_int(1, n - 2));
  if (j >= i) ++j;  // distinct positions
  std::swap(tour.order[i], tour.order[j]);
}

std::vector<std::uint8_t> plan_to_mask(const PackingPlan& plan, int n_items) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n_items), 0);
  for (int id : plan.picks) mask[static_cast<std::size_t>(id) - 1] = 1;
  return mask;
}

PackingPlan mask_to_plan(const std::vector<std::uint8_t>& mask) {
  PackingPlan plan;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) plan.picks.push_back(static_cast<int>(i) + 1);
  return plan;
}

void repair_capacity(std::vector<std::uint8_t>& mask, const TtpInstance& inst) {
  double weight = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) weight += inst.items()[i].weight;
  while (weight > inst.capacity()) {
    int worst = -1;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      const Item& it = inst.items()[i];
      const double ratio = it.profit / it.weight;
      if (worst < 0 || ratio < worst_ratio ||
          (ratio == worst_ratio && it.id > inst.items()[static_cast<std::size_t>(worst)].id)) {
        worst = static_cast<int>(i);
        worst_ratio = ratio;
      }
    }
    mask[static_cast<std::size_t>(worst)] = 0;
    weight -= inst.items()[static_cast<std::size_t>(worst)].weight;
  }
}

std::vector<Solution> expand_to_population(const Solution& base, int pop_size,
                                           const TtpInstance& inst, Rng& rng,
                                           GenotypeSet* exclude) {
  if (pop_size < 1) throw ConfigError("population size must be >= 1");
  validate_tour(inst, base.tour);
  validate_plan(inst, base.plan);

  GenotypeSet local;
  GenotypeSet& seen = exclude ? *exclude : local;
  std::vector<Solution> out;
  out.reserve(static_cast<std::size_t>(pop_size));
  if (seen.insert(base).second) out.push_back(base);

  const int n_items = inst.n_items();
  // Mutation steps allowed before declaring the genotype space exhausted.
  std::uint64_t attempts_left = 2000ull * static_cast<std::uint64_t>(pop_size) + 20000ull;
  while (static_cast<int>(out.size()) < pop_size) {
    Solution cand = base;
    auto mask = plan_to_mask(cand.plan, n_items);
    do {
      if (attempts_left-- == 0)
        throw ValidationError("cannot reach " + std::to_string(pop_size) +
                              " unique solutions by perturbation");
      const bool flip_item = n_items > 0 && (rng.uniform_int(0, 1) == 1);
      if (flip_item) {
        const auto idx = static_cast<std::size_t>(rng.uniform_int(0, n_items - 1));
        mask[idx] ^= 1;
        repair_capacity(mask, inst);
        cand.plan = mask_to_plan(mask);
      } else {
        swap_mutation(cand.tour, rng);
      }
    } while (seen.contains(cand));
    seen.insert(cand);
    out.push_back(cand);
  }
  return out;
}

}  // namespace dttp
