#include <catch_amalgamated.hpp>

#include <vector>

#include "kmo/cost.hpp"
#include "test_util.hpp"

using namespace kmo;
using kmo_test::line;

TEST_CASE("dist_to_set picks closest member, lowest index on ties") {
  const PointSet ps = line({0.0, 1.0, 10.0, 5.0});
  const IndexSubset s({0, 2});

  const auto r = dist_to_set(ps, 1, s);
  CHECK(r.distance == 1.0);
  CHECK(r.index == 0);

  const auto self = dist_to_set(ps, 2, s);
  CHECK(self.distance == 0.0);
  CHECK(self.index == 2);

  const auto tie = dist_to_set(ps, 3, s);  // point 5 sits midway between 0 and 10
  CHECK(tie.distance == 5.0);
  CHECK(tie.index == 0);

  CHECK_THROWS_AS(dist_to_set(ps, 0, IndexSubset{}), std::invalid_argument);
}

TEST_CASE("cost sums squared distances") {
  const PointSet two = line({0.0, 3.0});
  CHECK(cost(two, IndexSubset({0})) == 9.0);
  CHECK(cost(two, IndexSubset::full(2)) == 0.0);

  const PointSet three = line({0.0, 1.0, 10.0});
  CHECK(cost(three, IndexSubset({0})) == 101.0);

  const PointSet single = line({4.0});
  CHECK(cost(single, IndexSubset({0})) == 0.0);
}

TEST_CASE("out_z selects farthest points") {
  const PointSet ps = line({0.0, 1.0, 10.0});
  const IndexSubset s({0});
  CHECK(out_z(ps, s, 0) == IndexSubset{});
  CHECK(out_z(ps, s, 1) == IndexSubset({2}));
  CHECK(out_z(ps, s, 3) == IndexSubset({0, 1, 2}));
  CHECK_THROWS_AS(out_z(ps, s, 4), std::invalid_argument);

  const PointSet single = line({4.0});
  CHECK(out_z(single, IndexSubset({0}), 1) == IndexSubset({0}));

  // Equidistant points drop in index order.
  const PointSet sym = line({-1.0, 0.0, 1.0});
  CHECK(out_z(sym, IndexSubset({1}), 1) == IndexSubset({0}));
}

TEST_CASE("cost_out drops the farthest z points") {
  const PointSet ps = line({0.0, 1.0, 10.0});
  CHECK(cost_out(ps, IndexSubset({0}), 1) == 1.0);
  CHECK(cost_out(ps, IndexSubset({0}), 0) == cost(ps, IndexSubset({0})));
  CHECK(cost_out(ps, IndexSubset({1}), 1) == 1.0);
}

TEST_CASE("cost_out is nonincreasing in z") {
  const PointSet ps = kmo_test::random_points(40, 2, 11);
  const IndexSubset s({3, 17});
  double prev = cost_out(ps, s, 0);
  for (long long z = 1; z <= 40; ++z) {
    const double cur = cost_out(ps, s, z);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  CHECK(cost_out(ps, s, 40) == 0.0);
}

TEST_CASE("wcost with unit weights equals cost bitwise") {
  const PointSet ps = kmo_test::random_points(60, 3, 5);
  const WeightFn unit = WeightFn::unit(IndexSubset::full(60));
  const IndexSubset s({1, 30, 59});
  CHECK(wcost(ps, unit, s) == cost(ps, s));

  const PointSet m = kmo_test::random_l1_matrix(25, 2, 6);
  const IndexSubset sm({0, 24});
  CHECK(wcost(m, WeightFn::unit(IndexSubset::full(25)), sm) == cost(m, sm));
}

TEST_CASE("wcost weights contributions") {
  const PointSet ps = line({0.0, 3.0});
  const WeightFn w = WeightFn::from_entries({{0, 2}, {1, 1}});
  CHECK(wcost(ps, w, IndexSubset({1})) == 18.0);
  const WeightFn zeros = WeightFn::from_entries({{0, 0}, {1, 0}});
  CHECK(wcost(ps, zeros, IndexSubset({0})) == 0.0);
}

TEST_CASE("scale_weights removes exactly z units, farthest first") {
  const PointSet ps = line({0.0, 1.0, 10.0});
  const WeightFn w = WeightFn::unit(IndexSubset::full(3));

  CHECK(scale_weights(ps, w, IndexSubset({0}), 0) == w);
  CHECK(scale_weights(ps, w, IndexSubset({0}), 1) ==
        WeightFn::from_entries({{0, 1}, {1, 1}, {2, 0}}));

  const PointSet pair = line({0.0, 10.0});
  const WeightFn w2 = WeightFn::from_entries({{0, 1}, {1, 3}});
  CHECK(scale_weights(pair, w2, IndexSubset({0}), 2) ==
        WeightFn::from_entries({{0, 1}, {1, 1}}));

  CHECK_THROWS_AS(scale_weights(pair, w2, IndexSubset({0}), 5), std::invalid_argument);
}

TEST_CASE("scale_weights property: exact removal, no negatives") {
  const PointSet ps = kmo_test::random_points(30, 2, 21);
  kmo::detail::Rng rng(3);
  std::vector<WeightEntry> entries;
  for (int p = 0; p < 30; ++p) {
    entries.push_back({p, static_cast<long long>(rng.below(4))});
  }
  const WeightFn w = WeightFn::from_entries(entries);
  const IndexSubset s({2, 9, 20});
  for (long long z = 0; z <= w.total(); z += 3) {
    const WeightFn scaled = scale_weights(ps, w, s, z);
    CHECK(scaled.total() == w.total() - z);
    for (const auto& e : scaled.entries()) CHECK(e.weight >= 0);
  }
}

TEST_CASE("wcost_out composes scaling and weighted cost") {
  const PointSet ps = line({0.0, 1.0, 10.0});
  const WeightFn w = WeightFn::unit(IndexSubset::full(3));
  const IndexSubset s({0});
  CHECK(wcost_out(ps, w, s, 1) == wcost(ps, scale_weights(ps, w, s, 1), s));
  CHECK(wcost_out(ps, w, s, 1) == 1.0);
  CHECK(wcost_out(ps, w, s, 0) == wcost(ps, w, s));
}

TEST_CASE("fact: relaxed triangle inequalities hold on loaded metrics") {
  const PointSet eu = kmo_test::random_points(50, 3, 77);
  const PointSet ma = kmo_test::random_l1_matrix(30, 2, 78);
  kmo::detail::Rng rng(79);
  for (const PointSet* ps : {&eu, &ma}) {
    const int n = ps->size();
    for (int t = 0; t < 1500; ++t) {
      const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int ssize = 1 + static_cast<int>(rng.below(4));
      const IndexSubset s(rng.sample_distinct(n, ssize));

      const double lhs = dist_to_set(*ps, p, s).distance;
      const double rhs = ps->dist(p, q) + dist_to_set(*ps, q, s).distance;
      CHECK(lhs <= rhs + 1e-12 * std::max(1.0, rhs));

      for (const double c : {0.1, 1.0, 10.0}) {
        const double l2 = kmo::detail::sqdist(*ps, p, r);
        const double r2 = (1.0 + c) * kmo::detail::sqdist(*ps, p, q) +
                          (1.0 + 1.0 / c) * kmo::detail::sqdist(*ps, q, r);
        CHECK(l2 <= r2 + 1e-12 * std::max(1.0, r2));
      }
    }
  }
}

TEST_CASE("pairwise distance ratio") {
  const PointSet ps = line({0.0, 1.0, 10.0});
  CHECK(pairwise_distance_ratio(ps) == 10.0);
  CHECK(pairwise_distance_ratio(line({3.0})) == 1.0);
  CHECK(pairwise_distance_ratio(line({1.0, 1.0})) == 1.0);
}
