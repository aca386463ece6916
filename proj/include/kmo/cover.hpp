#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "kmo/cost.hpp"
#include "kmo/detail/rng.hpp"
#include "kmo/point_set.hpp"

namespace kmo {

/// Order in which the greedy cover picks its next uncovered point.
/// by_index is the deterministic default; seeded_random draws a fixed
/// permutation up front; farthest_first scans by decreasing distance from
/// the reference set X (an experiment knob, not a default).
enum class ScanOrder { by_index, seeded_random, farthest_first };

/// Result of a greedy ball cover. Every point of the covered domain has
/// exactly one proxy among the selected points, each selected point is its
/// own proxy, and weights add up the covered mass per proxy.
struct CoverResult {
  IndexSubset domain;           // the covered input P
  IndexSubset points;           // selected cover Y, subset of domain
  WeightFn weights;             // total absorbed weight per cover point
  std::vector<int> proxy;       // parallel to domain.members(): proxy point id
  std::vector<int> selection;   // cover points in greedy pick order

  int proxy_of(int point) const {
    const int pos = domain.position(point);
    if (pos < 0) throw std::out_of_range("point not in covered domain");
    return proxy[static_cast<std::size_t>(pos)];
  }
};

namespace detail {

inline CoverResult cover_impl(const PointSet& ps, const IndexSubset& P,
                              const WeightFn* w_in, const IndexSubset& X,
                              double delta, double R, ScanOrder order,
                              std::uint64_t seed) {
  if (!(delta > 0.0)) throw std::invalid_argument("cover precision must be positive");
  if (R < 0.0) throw std::invalid_argument("cover threshold must be nonnegative");
  if (P.empty()) throw std::invalid_argument("cover of empty point set");
  if (X.empty()) throw std::invalid_argument("cover against empty reference set");
  P.check_against(ps);
  X.check_against(ps);

  const auto& members = P.members();
  const std::size_t m = members.size();

  std::vector<long long> weight(m, 1);
  if (w_in != nullptr) {
    for (std::size_t i = 0; i < m; ++i) {
      weight[i] = w_in->at(members[i]);
      if (weight[i] <= 0) {
        throw std::invalid_argument("cover input weights must be positive");
      }
    }
  }

  // d(p, X) never changes during the loop; compute it once per point.
  std::vector<double> dist_x(m);
  for (std::size_t i = 0; i < m; ++i) {
    dist_x[i] = dist_to_set(ps, members[i], X).distance;
  }

  std::vector<int> scan(m);
  for (std::size_t i = 0; i < m; ++i) scan[i] = static_cast<int>(i);
  switch (order) {
    case ScanOrder::by_index:
      break;
    case ScanOrder::seeded_random: {
      Rng rng(seed);
      rng.shuffle(scan.begin(), scan.end());
      break;
    }
    case ScanOrder::farthest_first:
      std::sort(scan.begin(), scan.end(), [&](int a, int b) {
        if (dist_x[static_cast<std::size_t>(a)] != dist_x[static_cast<std::size_t>(b)]) {
          return dist_x[static_cast<std::size_t>(a)] > dist_x[static_cast<std::size_t>(b)];
        }
        return a < b;
      });
      break;
  }

  std::vector<bool> alive(m, true);
  std::vector<int> proxy(m, -1);
  std::vector<int> selection;
  std::vector<WeightEntry> weights;

  for (const int pick : scan) {
    const std::size_t qi = static_cast<std::size_t>(pick);
    if (!alive[qi]) continue;
    alive[qi] = false;
    const int q = members[qi];
    proxy[qi] = q;
    long long wq = weight[qi];
    for (std::size_t j = 0; j < m; ++j) {
      if (!alive[j]) continue;
      const double threshold = delta * std::max(R, dist_x[j]);
      if (ps.dist(members[j], q) <= threshold) {
        alive[j] = false;
        proxy[j] = q;
        wq += weight[j];
      }
    }
    selection.push_back(q);
    weights.push_back({q, wq});
  }

  CoverResult out;
  out.domain = P;
  std::vector<int> sorted = selection;
  std::sort(sorted.begin(), sorted.end());
  out.points = IndexSubset(std::move(sorted));
  out.weights = WeightFn::from_entries(std::move(weights));
  out.proxy = std::move(proxy);
  out.selection = std::move(selection);
  return out;
}

}  // namespace detail

/// Greedy ball cover: repeatedly takes the next uncovered point q (per scan
/// order), adds it to the cover with its own weight, and absorbs every
/// remaining point p with d(p, q) <= delta * max(R, d(p, X)) into q.
inline CoverResult cover_with_balls(const PointSet& ps, const IndexSubset& P,
                                    const IndexSubset& X, double delta, double R,
                                    ScanOrder order = ScanOrder::by_index,
                                    std::uint64_t seed = 0) {
  return detail::cover_impl(ps, P, nullptr, X, delta, R, order, seed);
}

/// Weighted form: an absorbed point contributes its input weight to its proxy,
/// so the total output weight equals the total input weight.
inline CoverResult cover_with_balls_weighted(const PointSet& ps, const IndexSubset& P,
                                             const WeightFn& w_in, const IndexSubset& X,
                                             double delta, double R,
                                             ScanOrder order = ScanOrder::by_index,
                                             std::uint64_t seed = 0) {
  return detail::cover_impl(ps, P, &w_in, X, delta, R, order, seed);
}

}  // namespace kmo
