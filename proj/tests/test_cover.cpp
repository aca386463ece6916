#include <catch_amalgamated.hpp>

#include <vector>

#include "kmo/cover.hpp"
#include "test_util.hpp"

using namespace kmo;
using kmo_test::line;

TEST_CASE("cover hand trace: absorption within delta*max(R, d(p,X))") {
  // Points 0, 0.4, 10 on a line, X = {0}, delta = 0.5, R = 1.
  // q=0 absorbs 0.4 (0.4 <= 0.5*max(1, 0.4)); 10 stays out (10 > 0.5*10).
  const PointSet ps = line({0.0, 0.4, 10.0});
  const auto r = cover_with_balls(ps, IndexSubset::full(3), IndexSubset({0}), 0.5, 1.0);
  CHECK(r.points == IndexSubset({0, 2}));
  CHECK(r.weights == WeightFn::from_entries({{0, 2}, {2, 1}}));
  CHECK(r.proxy_of(1) == 0);
  CHECK(r.proxy_of(0) == 0);
  CHECK(r.proxy_of(2) == 2);
  CHECK(r.selection == std::vector<int>{0, 2});
}

TEST_CASE("cover hand trace: nothing absorbed when threshold too small") {
  const PointSet ps = line({0.0, 1.0, 10.0});
  // d(1,0)=1 > 0.5*max{1, d(1,X)=1} = 0.5, so every point stands alone.
  const auto r = cover_with_balls(ps, IndexSubset::full(3), IndexSubset({0}), 0.5, 1.0);
  CHECK(r.points == IndexSubset::full(3));
  CHECK(r.weights == WeightFn::unit(IndexSubset::full(3)));
}

TEST_CASE("cover degenerate and error cases") {
  const PointSet ps = line({0.0, 1.0});
  CHECK_THROWS_AS(cover_with_balls(ps, IndexSubset::full(2), IndexSubset({0}), 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cover_with_balls(ps, IndexSubset::full(2), IndexSubset{}, 0.5, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cover_with_balls(ps, IndexSubset{}, IndexSubset({0}), 0.5, 1.0),
                  std::invalid_argument);

  // R = 0 is legal: threshold degenerates to delta*d(p,X).
  const auto r = cover_with_balls(ps, IndexSubset::full(2), IndexSubset({0}), 0.5, 0.0);
  CHECK(r.points == IndexSubset({0, 1}));
  const auto r2 = cover_with_balls(ps, IndexSubset::full(2), IndexSubset({0}), 2.0, 0.0);
  CHECK(r2.points == IndexSubset({0}));

  // Large delta collapses everything onto the first scanned point.
  const auto all = cover_with_balls(ps, IndexSubset::full(2), IndexSubset({0}), 2.0, 1.0);
  CHECK(all.points == IndexSubset({0}));
  CHECK(all.weights.at(0) == 2);
}

TEST_CASE("weighted cover accumulates input weights") {
  const PointSet ps = line({0.0, 0.4});
  const WeightFn w = WeightFn::from_entries({{0, 5}, {1, 7}});
  const auto r = cover_with_balls_weighted(ps, IndexSubset::full(2), w,
                                           IndexSubset({0}), 1.0, 1.0);
  CHECK(r.points == IndexSubset({0}));
  CHECK(r.weights == WeightFn::from_entries({{0, 12}}));

  const PointSet single = line({3.0});
  const auto s = cover_with_balls_weighted(single, IndexSubset({0}),
                                           WeightFn::from_entries({{0, 9}}),
                                           IndexSubset({0}), 0.5, 0.0);
  CHECK(s.points == IndexSubset({0}));
  CHECK(s.weights.at(0) == 9);

  CHECK_THROWS_AS(cover_with_balls_weighted(ps, IndexSubset::full(2),
                                            WeightFn::from_entries({{0, 1}, {1, 0}}),
                                            IndexSubset({0}), 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("cover invariants on random inputs") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const PointSet ps = kmo_test::random_points(60, 2, seed);
    kmo::detail::Rng rng(seed * 13);
    const IndexSubset X(rng.sample_distinct(60, 3));
    const double delta = 0.2 + 0.3 * rng.unit();
    const double R = 0.2 * rng.unit();
    const IndexSubset P = IndexSubset::full(60);
    const auto r = cover_with_balls(ps, P, X, delta, R);

    // Coverage bound for every point, by full scan.
    for (int i = 0; i < P.size(); ++i) {
      const int p = P[i];
      const int q = r.proxy[static_cast<std::size_t>(i)];
      CHECK(r.points.contains(q));
      const double bound = delta * std::max(R, dist_to_set(ps, p, X).distance);
      CHECK(ps.dist(p, q) <= bound + 1e-12);
    }

    // Weight conservation.
    CHECK(r.weights.total() == P.size());

    // Selected points are their own proxies.
    for (int y : r.points) CHECK(r.proxy_of(y) == y);

    // Pairwise separation: a later pick was not absorbed by an earlier one.
    for (std::size_t a = 0; a < r.selection.size(); ++a) {
      for (std::size_t b = a + 1; b < r.selection.size(); ++b) {
        const int y = r.selection[a];
        const int later = r.selection[b];
        const double bound =
            delta * std::max(R, dist_to_set(ps, later, X).distance);
        CHECK(ps.dist(later, y) > bound);
      }
    }
  }
}

TEST_CASE("weighted cover with unit weights matches unweighted bit for bit") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const PointSet ps = kmo_test::random_points(50, 2, seed);
    kmo::detail::Rng rng(seed);
    const IndexSubset X(rng.sample_distinct(50, 2));
    const IndexSubset P = IndexSubset::full(50);
    const double delta = 0.1 + rng.unit();
    const double R = rng.unit();
    const auto plain = cover_with_balls(ps, P, X, delta, R);
    const auto weighted =
        cover_with_balls_weighted(ps, P, WeightFn::unit(P), X, delta, R);
    CHECK(plain.points == weighted.points);
    CHECK(plain.weights == weighted.weights);
    CHECK(plain.proxy == weighted.proxy);
    CHECK(plain.selection == weighted.selection);
  }
}

TEST_CASE("scan orders are deterministic and cover the domain") {
  const PointSet ps = kmo_test::random_points(40, 2, 5);
  const IndexSubset P = IndexSubset::full(40);
  const IndexSubset X({0, 7});
  for (const ScanOrder order :
       {ScanOrder::by_index, ScanOrder::seeded_random, ScanOrder::farthest_first}) {
    const auto a = cover_with_balls(ps, P, X, 0.4, 0.1, order, 42);
    const auto b = cover_with_balls(ps, P, X, 0.4, 0.1, order, 42);
    CHECK(a.points == b.points);
    CHECK(a.weights == b.weights);
    CHECK(a.proxy == b.proxy);
    CHECK(a.weights.total() == 40);
  }
  // Different seeds may give different random-scan covers but stay valid.
  const auto c = cover_with_balls(ps, P, X, 0.4, 0.1, ScanOrder::seeded_random, 1);
  CHECK(c.weights.total() == 40);
}
