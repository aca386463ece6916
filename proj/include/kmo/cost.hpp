#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "kmo/detail/numeric.hpp"
#include "kmo/detail/rng.hpp"
#include "kmo/point_set.hpp"

namespace kmo {

struct NearestResult {
  double distance = 0.0;
  int index = -1;
};

/// Minimum distance from p to the members of S and the closest member.
/// Ties go to the lowest index.
inline NearestResult dist_to_set(const PointSet& ps, int p, const IndexSubset& S) {
  if (S.empty()) throw std::invalid_argument("distance to empty set");
  S.check_against(ps);
  NearestResult best;
  best.distance = std::numeric_limits<double>::infinity();
  for (int q : S) {
    const double d = ps.dist(p, q);
    if (d < best.distance) {
      best.distance = d;
      best.index = q;
    }
  }
  return best;
}

namespace detail {

/// Squared distances always go through the metric once; both geometry forms
/// share this single path.
inline double sqdist(const PointSet& ps, int p, int q) {
  const double d = ps.dist(p, q);
  return d * d;
}

inline double sqdist_to_set(const PointSet& ps, int p, const IndexSubset& S) {
  const double d = dist_to_set(ps, p, S).distance;
  return d * d;
}

}  // namespace detail

/// Sum over domain of squared distances to S, in ascending index order.
inline double cost_over(const PointSet& ps, const IndexSubset& domain,
                        const IndexSubset& S) {
  if (S.empty()) throw std::invalid_argument("cost against empty center set");
  S.check_against(ps);
  domain.check_against(ps);
  detail::KahanSum sum;
  for (int p : domain) sum.add(detail::sqdist_to_set(ps, p, S));
  return sum.value();
}

/// Sum over all points of squared distances to S.
inline double cost(const PointSet& ps, const IndexSubset& S) {
  if (S.empty()) throw std::invalid_argument("cost against empty center set");
  S.check_against(ps);
  detail::KahanSum sum;
  for (int p = 0; p < ps.size(); ++p) sum.add(detail::sqdist_to_set(ps, p, S));
  return sum.value();
}

/// The z points farthest from S. Among equal distances the lowest index is
/// taken first.
inline IndexSubset out_z(const PointSet& ps, const IndexSubset& S, long long z) {
  if (S.empty()) throw std::invalid_argument("outliers against empty center set");
  S.check_against(ps);
  if (z < 0 || z > ps.size()) throw std::invalid_argument("z outside [0, n]");
  if (z == 0) return IndexSubset{};
  std::vector<std::pair<double, int>> order;
  order.reserve(static_cast<std::size_t>(ps.size()));
  for (int p = 0; p < ps.size(); ++p) {
    order.emplace_back(dist_to_set(ps, p, S).distance, p);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<int> picked(static_cast<std::size_t>(z));
  for (long long i = 0; i < z; ++i) picked[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].second;
  return IndexSubset(std::move(picked));
}

/// Cost over all points except the z farthest ones.
inline double cost_out(const PointSet& ps, const IndexSubset& S, long long z) {
  const IndexSubset dropped = out_z(ps, S, z);
  detail::KahanSum sum;
  for (int p = 0; p < ps.size(); ++p) {
    if (dropped.contains(p)) continue;
    sum.add(detail::sqdist_to_set(ps, p, S));
  }
  return sum.value();
}

/// Weighted cost over the weight function's entries, ascending index order.
/// With unit weights over all points this reproduces cost() bit for bit.
inline double wcost(const PointSet& ps, const WeightFn& w, const IndexSubset& S) {
  if (S.empty()) throw std::invalid_argument("cost against empty center set");
  S.check_against(ps);
  detail::KahanSum sum;
  for (const auto& e : w.entries()) {
    if (e.weight == 0) continue;
    sum.add(static_cast<double>(e.weight) * detail::sqdist_to_set(ps, e.index, S));
  }
  return sum.value();
}

/// Removes exactly z units of weight, farthest from S first, ties to the
/// lowest index, with partial removal allowed at the boundary point.
inline WeightFn scale_weights(const PointSet& ps, const WeightFn& w,
                              const IndexSubset& S, long long z) {
  if (S.empty()) throw std::invalid_argument("scaling against empty center set");
  S.check_against(ps);
  if (z < 0) throw std::invalid_argument("negative outlier budget");
  if (z > w.total()) throw std::invalid_argument("outlier budget exceeds total weight");
  struct Row {
    double d;
    int index;
    long long weight;
  };
  std::vector<Row> rows;
  rows.reserve(w.entries().size());
  for (const auto& e : w.entries()) {
    rows.push_back({dist_to_set(ps, e.index, S).distance, e.index, e.weight});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.d != b.d) return a.d > b.d;
    return a.index < b.index;
  });
  long long remaining = z;
  std::vector<WeightEntry> out;
  out.reserve(rows.size());
  for (const Row& r : rows) {
    const long long cut = std::min(remaining, r.weight);
    remaining -= cut;
    out.push_back({r.index, r.weight - cut});
  }
  return WeightFn::from_entries(std::move(out));
}

/// Weighted cost after scaling z units from the points farthest from S.
inline double wcost_out(const PointSet& ps, const WeightFn& w, const IndexSubset& S,
                        long long z) {
  return wcost(ps, scale_weights(ps, w, S, z), S);
}

/// Ratio between the largest and the smallest positive pairwise distance.
/// Exact for n <= cap, otherwise estimated from cap^2 sampled pairs.
inline double pairwise_distance_ratio(const PointSet& ps, int cap = 4096,
                                      std::uint64_t seed = 0) {
  const int n = ps.size();
  if (n < 2) return 1.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  auto feed = [&](int a, int b) {
    const double d = ps.dist(a, b);
    hi = std::max(hi, d);
    if (d > 0.0) lo = std::min(lo, d);
  };
  if (n <= cap) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) feed(i, j);
    }
  } else {
    detail::Rng rng(detail::derive_seed(seed, 0xd157));
    const long long trials = static_cast<long long>(cap) * cap;
    for (long long t = 0; t < trials; ++t) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (i != j) feed(i, j);
    }
  }
  if (!(lo < std::numeric_limits<double>::infinity()) || hi == 0.0) return 1.0;
  return hi / lo;
}

}  // namespace kmo
