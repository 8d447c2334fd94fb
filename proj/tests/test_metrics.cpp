#include <doctest.h>

#include "dttp/metrics.hpp"
#include "oracles.hpp"

using namespace dttp;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("nadir is the mean off-diagonal distance times N") {
  std::vector<City> cities{{1, 0, 0}, {2, 0, 4}, {3, 3, 0}};
  std::vector<Item> items{{1, 10, 5, 2}, {2, 10, 5, 3}};
  const TtpInstance inst =
      TtpInstance::create("t", std::move(cities), std::move(items), 8.0);
  const NadirPoint ref = nadir(inst);
  CHECK(ref.tour_bound == doctest::Approx(12.0));  // mean {3,4,5} = 4, N = 3
  CHECK(ref.profit_bound == 0.0);

  // Homogeneous under coordinate scaling.
  std::vector<City> scaled{{1, 0, 0}, {2, 0, 8}, {3, 6, 0}};
  std::vector<Item> items2{{1, 10, 5, 2}, {2, 10, 5, 3}};
  const TtpInstance big =
      TtpInstance::create("t2", std::move(scaled), std::move(items2), 8.0);
  CHECK(nadir(big).tour_bound == doctest::Approx(24.0));
}

TEST_CASE("hypervolume of a single point is one rectangle") {
  const NadirPoint ref{10.0, 0.0};
  const std::vector<ObjectivePoint> front{{2.0, 3.0}};
  CHECK(hypervolume(front, ref) == doctest::Approx(24.0));
}

TEST_CASE("fronts that do not dominate the nadir score exactly zero") {
  const NadirPoint ref{10.0, 0.0};
  CHECK(hypervolume(std::vector<ObjectivePoint>{}, ref) == 0.0);
  CHECK(hypervolume(std::vector<ObjectivePoint>{{10.0, 5.0}, {12.0, 8.0}}, ref) == 0.0);
  CHECK(hypervolume(std::vector<ObjectivePoint>{{4.0, 0.0}}, ref) == 0.0);
}

TEST_CASE("dominated points contribute nothing") {
  const NadirPoint ref{10.0, 0.0};
  std::vector<ObjectivePoint> front{{2.0, 3.0}, {5.0, 6.0}};
  const double base = hypervolume(front, ref);
  front.push_back({6.0, 5.0});  // dominated by (5, 6)
  front.push_back({2.0, 3.0});  // exact duplicate
  CHECK(hypervolume(front, ref) == doctest::Approx(base));
}

TEST_CASE("staircase area equals the Monte-Carlo estimate") {
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const NadirPoint ref{100.0, 0.0};
    std::vector<ObjectivePoint> pts;
    const int k = static_cast<int>(rng.uniform_int(2, 8));
    for (int i = 0; i < k; ++i)
      pts.push_back({rng.uniform_real(5.0, 95.0), rng.uniform_real(5.0, 50.0)});
    const double exact = hypervolume(pts, ref);
    Rng mc_rng(1000 + static_cast<std::uint64_t>(trial));
    const double estimate = oracles::mc_hypervolume(pts, ref, 400000, mc_rng);
    CHECK(estimate == doctest::Approx(exact).epsilon(0.02));
  }
}

TEST_CASE("hypervolume is monotone under front domination and f-shifts") {
  Rng rng(21);
  const NadirPoint ref{50.0, 0.0};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ObjectivePoint> front;
    const int k = static_cast<int>(rng.uniform_int(1, 6));
    for (int i = 0; i < k; ++i)
      front.push_back({rng.uniform_real(1.0, 49.0), rng.uniform_real(1.0, 30.0)});
    const double base = hypervolume(front, ref);

    std::vector<ObjectivePoint> shifted = front;
    for (auto& p : shifted) p.f -= 0.5;
    CHECK(hypervolume(shifted, ref) > base);

    std::vector<ObjectivePoint> augmented = front;
    augmented.push_back({rng.uniform_real(1.0, 49.0), rng.uniform_real(1.0, 30.0)});
    CHECK(hypervolume(augmented, ref) >= base - 1e-12);
  }
}

TEST_CASE("max spread is the bounding-box diagonal of the non-dominated set") {
  CHECK(max_spread(std::vector<ObjectivePoint>{}) == 0.0);
  CHECK(max_spread(std::vector<ObjectivePoint>{{3.0, 4.0}}) == 0.0);
  const std::vector<ObjectivePoint> two{{1.0, 1.0}, {4.0, 5.0}};
  CHECK(max_spread(two) == doctest::Approx(5.0));
  // Duplicates do not change the spread.
  const std::vector<ObjectivePoint> dup{{1.0, 1.0}, {4.0, 5.0}, {4.0, 5.0}, {1.0, 1.0}};
  CHECK(max_spread(dup) == doctest::Approx(5.0));
  // Removing dominated members does not change the spread.
  const std::vector<ObjectivePoint> with_dominated{{1.0, 1.0}, {4.0, 5.0}, {4.4, 1.0}};
  CHECK(max_spread(with_dominated) == doctest::Approx(5.0));
}

namespace {

std::vector<SnapshotValue> rank_fixture() {
  // 3 strategies x 3 schedules x 2 repeats x 1 interval; repeat means feed
  // the per-schedule values below. Expected median HV ranks:
  //   A: {1, 2.5, 1.5} -> 1.5,  B: {2, 1, 1.5} -> 1.5,  C: {3, 2.5, 3} -> 3.
  // Spreads all tie at 1 -> every strategy gets rank 2.
  const double hv[3][3] = {{10, 3, 7}, {5, 9, 7}, {1, 3, 1}};  // [strategy][schedule]
  std::vector<SnapshotValue> values;
  const std::string names[3] = {"A", "B", "C"};
  for (int s = 0; s < 3; ++s)
    for (int sched = 0; sched < 3; ++sched)
      for (int rep = 0; rep < 2; ++rep) {
        // Perturb repeats symmetrically so the mean is the table value.
        const double delta = rep == 0 ? 0.25 : -0.25;
        values.push_back(
            SnapshotValue{names[s], sched, rep, 0, hv[s][sched] + delta, 1.0});
      }
  return values;
}

}  // namespace

TEST_CASE("rank aggregation reproduces the hand-computed table") {
  const RankTable table = rank_strategies(rank_fixture());
  auto median_of = [&table](const std::string& strategy, const std::string& metric) {
    for (const RankRow& row : table.rows)
      if (row.strategy == strategy && row.metric == metric && row.interval == 0)
        return row.median_rank;
    FAIL("missing row");
    return 0.0;
  };
  CHECK(median_of("A", "hv") == doctest::Approx(1.5));
  CHECK(median_of("B", "hv") == doctest::Approx(1.5));
  CHECK(median_of("C", "hv") == doctest::Approx(3.0));
  CHECK(median_of("A", "spread") == doctest::Approx(2.0));
  CHECK(median_of("B", "spread") == doctest::Approx(2.0));
  CHECK(median_of("C", "spread") == doctest::Approx(2.0));
}

TEST_CASE("a strategy that always wins is ranked 1 everywhere") {
  std::vector<SnapshotValue> values;
  for (int sched = 0; sched < 4; ++sched) {
    values.push_back(SnapshotValue{"good", sched, 0, 0, 10.0 + sched, 2.0});
    values.push_back(SnapshotValue{"bad", sched, 0, 0, 1.0 + sched, 1.0});
  }
  const RankTable table = rank_strategies(values);
  for (const RankRow& row : table.rows) {
    if (row.strategy == "good") CHECK(row.median_rank == 1.0);
    if (row.strategy == "bad") CHECK(row.median_rank == 2.0);
  }
}

TEST_CASE("ranking is invariant under monotone transformations") {
  const auto values = rank_fixture();
  std::vector<SnapshotValue> transformed = values;
  for (auto& v : transformed) v.hv = 3.0 * v.hv * v.hv + 7.0;  // strictly increasing on hv > 0
  const RankTable a = rank_strategies(values);
  const RankTable b = rank_strategies(transformed);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].median_rank == doctest::Approx(b.rows[i].median_rank));
}

TEST_CASE("incomplete grids are refused") {
  auto values = rank_fixture();
  values.pop_back();
  CHECK_THROWS_AS(rank_strategies(values), ValidationError);
  auto dup = rank_fixture();
  dup.push_back(dup.front());
  CHECK_THROWS_AS(rank_strategies(dup), ValidationError);
}

TEST_CASE("nondominated filtering matches the peeling oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ObjectivePoint> pts;
    const int k = static_cast<int>(rng.uniform_int(1, 12));
    for (int i = 0; i < k; ++i)
      pts.push_back({rng.uniform_real(0.0, 10.0), rng.uniform_real(0.0, 10.0)});
    const auto ranks = oracles::front_ranks(pts);
    const auto front = nondominated_points(pts);
    // Every oracle-front-0 point appears; nothing else does.
    std::size_t expected = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (ranks[i] == 0) ++expected;
    CHECK(front.size() == expected);
    for (const auto& p : front) {
      bool found = false;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (ranks[i] == 0 && pts[i].f == p.f && pts[i].g == p.g) found = true;
      CHECK(found);
    }
  }
}

TEST_SUITE_END();
