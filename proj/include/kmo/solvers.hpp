#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmo/cost.hpp"
#include "kmo/detail/combinations.hpp"
#include "kmo/detail/numeric.hpp"
#include "kmo/detail/rng.hpp"
#include "kmo/point_set.hpp"

namespace kmo {

/// Raised when an exhaustive routine would exceed its configured budget.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LocalSearchConfig {
  double epsilon = 0.25;     // improvement threshold, in (0, 1)
  int rho_swap = 1;          // max |Q|, |U| per multi-swap
  long long max_iters = 0;   // 0 resolves to 100 * k
  std::uint64_t seed = 0;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw std::invalid_argument("epsilon must lie in (0, 1)");
    }
    if (rho_swap < 1) throw std::invalid_argument("rho_swap must be >= 1");
    if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  }

  long long iters_for(int k) const { return max_iters > 0 ? max_iters : 100LL * k; }
};

/// Bicriteria solution of weighted k-means with outliers: centers plus the
/// outlier weight function, with the residual weights and the objective at
/// termination. trace holds the objective after every accepted step,
/// starting from the initial state.
struct OutlierSolution {
  IndexSubset centers;
  WeightFn residual;          // input weights minus outliers
  WeightFn outliers;          // scaled-out weight per point
  double value = 0.0;
  std::vector<double> trace;
  bool converged = false;
};

struct BruteBudget {
  int max_n = 25;
  int max_k = 3;
};

struct BruteResult {
  IndexSubset centers;
  double value = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Flattened view of a weighted sub-instance: ascending point ids with
/// parallel weights.
struct FlatInstance {
  const PointSet* ps = nullptr;
  std::vector<int> pts;
  std::vector<double> w;
};

inline FlatInstance flatten(const PointSet& ps, const IndexSubset& P,
                            const WeightFn* w) {
  P.check_against(ps);
  FlatInstance inst;
  inst.ps = &ps;
  inst.pts = P.members();
  inst.w.resize(inst.pts.size(), 1.0);
  if (w != nullptr) {
    for (std::size_t i = 0; i < inst.pts.size(); ++i) {
      inst.w[i] = static_cast<double>(w->at(inst.pts[i]));
    }
  }
  return inst;
}

/// Squared distance to the nearest and second-nearest center per point, and
/// the owning center's position. Ties go to the earlier center in the list.
struct CenterDists {
  std::vector<double> d1, d2;
  std::vector<int> owner;
};

inline CenterDists center_dists(const FlatInstance& inst,
                                const std::vector<int>& centers) {
  const std::size_t n = inst.pts.size();
  CenterDists cd;
  cd.d1.assign(n, std::numeric_limits<double>::infinity());
  cd.d2.assign(n, std::numeric_limits<double>::infinity());
  cd.owner.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = sqdist(*inst.ps, inst.pts[i], centers[c]);
      if (d < cd.d1[i]) {
        cd.d2[i] = cd.d1[i];
        cd.d1[i] = d;
        cd.owner[i] = static_cast<int>(c);
      } else if (d < cd.d2[i]) {
        cd.d2[i] = d;
      }
    }
  }
  return cd;
}

inline double flat_wcost(const FlatInstance& inst, const std::vector<int>& centers) {
  KahanSum sum;
  for (std::size_t i = 0; i < inst.pts.size(); ++i) {
    if (inst.w[i] == 0.0) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const int c : centers) best = std::min(best, sqdist(*inst.ps, inst.pts[i], c));
    sum.add(inst.w[i] * best);
  }
  return sum.value();
}

struct SwapChoice {
  bool found = false;
  double value = std::numeric_limits<double>::infinity();
  int out_pos = -1;  // position in the centers vector
  int in_point = -1;
};

/// Best single swap for the fixed-weight objective. For each candidate
/// incoming point one pass accumulates the cost with the candidate added,
/// plus a per-center correction for removing that center, so a full sweep
/// costs O(n^2 + nk) instead of O(n^2 k).
inline SwapChoice best_single_swap(const FlatInstance& inst,
                                   const std::vector<int>& centers,
                                   const CenterDists& cd) {
  const std::size_t n = inst.pts.size();
  const std::size_t k = centers.size();
  SwapChoice best;
  std::vector<double> removal(k);
  for (std::size_t i = 0; i < n; ++i) {
    const int in_point = inst.pts[i];
    if (std::find(centers.begin(), centers.end(), in_point) != centers.end()) continue;
    double base = 0.0;
    std::fill(removal.begin(), removal.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double din = sqdist(*inst.ps, inst.pts[j], in_point);
      const double kept = std::min(cd.d1[j], din);
      base += inst.w[j] * kept;
      const double without = std::min(cd.d2[j], din);
      removal[static_cast<std::size_t>(cd.owner[j])] += inst.w[j] * (without - kept);
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double v = base + removal[c];
      const bool better =
          !best.found || v < best.value ||
          (v == best.value &&
           (centers[c] < centers[static_cast<std::size_t>(best.out_pos)] ||
            (centers[c] == centers[static_cast<std::size_t>(best.out_pos)] &&
             in_point < best.in_point)));
      if (better) {
        best.found = true;
        best.value = v;
        best.out_pos = static_cast<int>(c);
        best.in_point = in_point;
      }
    }
  }
  return best;
}

/// D^2 seeding over a weighted instance: the first center is drawn with
/// probability proportional to weight, each further center proportional to
/// weight times squared distance to the chosen set.
inline std::vector<int> d2_seed(const FlatInstance& inst, int k, Rng& rng) {
  const std::size_t n = inst.pts.size();
  std::vector<bool> chosen(n, false);
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  std::vector<int> centers;
  centers.reserve(static_cast<std::size_t>(k));

  auto pick_fallback = [&]() -> std::size_t {
    for (std::size_t i = 0; i < n; ++i) {
      if (!chosen[i]) return i;
    }
    return 0;  // unreachable while k <= n
  };

  auto draw = [&](auto&& mass) -> std::size_t {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!chosen[i]) total += mass(i);
    }
    const double r = rng.unit() * total;
    if (!(total > 0.0)) return pick_fallback();
    double cum = 0.0;
    std::size_t last_positive = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      const double m = mass(i);
      if (m > 0.0) last_positive = i;
      cum += m;
      if (cum > r) return i;
    }
    return last_positive != n ? last_positive : pick_fallback();
  };

  for (int c = 0; c < k; ++c) {
    std::size_t pick;
    if (centers.empty()) {
      pick = draw([&](std::size_t i) { return inst.w[i]; });
    } else {
      pick = draw([&](std::size_t i) { return inst.w[i] * mind[i]; });
    }
    chosen[pick] = true;
    centers.push_back(inst.pts[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      mind[i] = std::min(mind[i], sqdist(*inst.ps, inst.pts[i], inst.pts[pick]));
    }
  }
  return centers;
}

constexpr double kSeqKmeansEps0 = 0.25;

}  // namespace detail

/// Heuristic weighted k-means without outliers: D^2 seeding followed by
/// single-swap local search that stops once no swap improves the weighted
/// cost by a factor of 1 - eps0/k (eps0 fixed at 1/4). The achieved ratio is
/// a solver attribute, not a certified constant.
inline IndexSubset seq_kmeans_weighted(const PointSet& ps, const IndexSubset& P,
                                       const WeightFn& w, int k,
                                       std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > P.size()) throw std::invalid_argument("k exceeds candidate set");
  if (k == P.size()) return P;
  detail::FlatInstance inst = detail::flatten(ps, P, &w);
  detail::Rng rng(seed);
  std::vector<int> centers = detail::d2_seed(inst, k, rng);
  std::sort(centers.begin(), centers.end());

  double cur = detail::flat_wcost(inst, centers);
  const long long cap = 200LL * k + 100;
  for (long long iter = 0; iter < cap; ++iter) {
    const auto cd = detail::center_dists(inst, centers);
    const auto swap = detail::best_single_swap(inst, centers, cd);
    if (!swap.found) break;
    if (!(cur > 0.0) ||
        !(swap.value <= (1.0 - detail::kSeqKmeansEps0 / k) * cur)) {
      break;
    }
    std::vector<int> next = centers;
    next[static_cast<std::size_t>(swap.out_pos)] = swap.in_point;
    std::sort(next.begin(), next.end());
    const double exact = detail::flat_wcost(inst, next);
    if (!(exact < cur)) break;
    centers = std::move(next);
    cur = exact;
  }
  return IndexSubset(std::move(centers));
}

/// Unweighted form; identical to the weighted solver under unit weights.
inline IndexSubset seq_kmeans(const PointSet& ps, const IndexSubset& P, int k,
                              std::uint64_t seed) {
  return seq_kmeans_weighted(ps, P, WeightFn::unit(P), k, seed);
}

/// Exact minimizer of the weighted outlier cost over all k-subsets of P.
/// Enumeration order is lexicographic over P's members and the first optimum
/// encountered wins ties.
inline BruteResult brute_force_opt(const PointSet& ps, const IndexSubset& P,
                                   const WeightFn& w, int k, long long z,
                                   const BruteBudget& budget = {}) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > P.size()) throw std::invalid_argument("k exceeds candidate set");
  if (z < 0 || z > w.total()) {
    throw std::invalid_argument("outlier budget outside [0, total weight]");
  }
  if (P.size() > budget.max_n || k > budget.max_k) {
    throw budget_error("exhaustive k-subset search over " +
                       std::to_string(P.size()) + " points with k=" +
                       std::to_string(k) + " exceeds the configured budget");
  }
  const auto& members = P.members();
  BruteResult best;
  detail::for_each_combination(P.size(), k, [&](const std::vector<int>& pos) {
    std::vector<int> pts(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      pts[i] = members[static_cast<std::size_t>(pos[i])];
    }
    IndexSubset S(std::move(pts));
    const double v = wcost_out(ps, w, S, z);
    if (v < best.value) {
      best.value = v;
      best.centers = std::move(S);
    }
  });
  return best;
}

/// Weighted local-search solver for k-means with z outliers in the style of
/// iterated center/outlier refinement. Each round builds two candidates from
/// the best single swap on the inlier-weighted instance:
///   (b) keep the accumulated outliers and scale z further units from the
///       residual points farthest from the swapped centers (pointwise sum);
///   (c) the most profitable single swap evaluated with a fresh z-unit
///       scaling of the full weights, merged by pointwise maximum.
/// The better candidate is accepted while it improves the objective by a
/// factor of at least 1 - epsilon/k. The outlier budget may grow across
/// rounds; the solution is bicriteria in the number of outliers.
inline OutlierSolution ls_outlier_weighted(const PointSet& ps, const IndexSubset& P,
                                           const WeightFn& w, int k, long long z,
                                           const LocalSearchConfig& cfg) {
  cfg.validate();
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > P.size()) throw std::invalid_argument("k exceeds candidate set");
  if (z < 0) throw std::invalid_argument("negative outlier budget");
  if (z >= w.total()) {
    throw std::invalid_argument("outlier budget consumes the whole instance");
  }

  detail::Rng rng(cfg.seed);
  std::vector<int> init;
  {
    const auto pick = rng.sample_distinct(P.size(), k);
    init.reserve(pick.size());
    for (const int pos : pick) init.push_back(P[pos]);
  }
  std::sort(init.begin(), init.end());
  IndexSubset centers(std::move(init));

  WeightFn out_w = w.minus(scale_weights(ps, w, centers, z));
  double value = wcost(ps, w.minus(out_w), centers);
  std::vector<double> trace{value};
  bool converged = false;

  const long long cap = cfg.iters_for(k);
  for (long long iter = 0; iter < cap; ++iter) {
    const WeightFn inlier = w.minus(out_w);

    // Standard swap step on the inlier-weighted instance.
    detail::FlatInstance inst = detail::flatten(ps, P, &inlier);
    const auto cd = detail::center_dists(inst, centers.members());
    double inlier_cur = 0.0;
    for (std::size_t i = 0; i < inst.pts.size(); ++i) {
      inlier_cur += inst.w[i] * cd.d1[i];
    }
    IndexSubset swapped = centers;
    const auto swap = detail::best_single_swap(inst, centers.members(), cd);
    if (swap.found && swap.value < inlier_cur) {
      std::vector<int> next = centers.members();
      next[static_cast<std::size_t>(swap.out_pos)] = swap.in_point;
      swapped = IndexSubset(std::move(next));
    }

    bool have_candidate = false;
    double best_value = std::numeric_limits<double>::infinity();
    IndexSubset best_centers;
    WeightFn best_outliers;

    // (b) scale z additional units from the residual instance.
    if (z <= inlier.total()) {
      WeightFn grown = out_w.plus(inlier.minus(scale_weights(ps, inlier, swapped, z)));
      const double v = wcost(ps, w.minus(grown), swapped);
      have_candidate = true;
      best_value = v;
      best_centers = swapped;
      best_outliers = std::move(grown);
    }

    // (c) most profitable single swap under a fresh full-weight scaling.
    for (int out_pos = 0; out_pos < swapped.size(); ++out_pos) {
      for (int in_point : P) {
        if (swapped.contains(in_point)) continue;
        std::vector<int> next = swapped.members();
        next[static_cast<std::size_t>(out_pos)] = in_point;
        IndexSubset cand(std::move(next));
        WeightFn fresh = w.minus(scale_weights(ps, w, cand, z));
        WeightFn merged = out_w.pointwise_max(fresh);
        const double v = wcost(ps, w.minus(merged), cand);
        if (!have_candidate || v < best_value) {
          have_candidate = true;
          best_value = v;
          best_centers = std::move(cand);
          best_outliers = std::move(merged);
        }
      }
    }

    if (!have_candidate || !(value > 0.0) ||
        !(best_value <= (1.0 - cfg.epsilon / k) * value)) {
      converged = true;
      break;
    }
    centers = std::move(best_centers);
    out_w = std::move(best_outliers);
    value = best_value;
    trace.push_back(value);
  }

  OutlierSolution sol;
  sol.centers = std::move(centers);
  sol.outliers = std::move(out_w);
  sol.residual = w.minus(sol.outliers);
  sol.value = value;
  sol.trace = std::move(trace);
  sol.converged = converged;
  return sol;
}

/// Weighted multi-swap local search for k-means with z outliers. Swaps up to
/// rho_swap centers against up to rho_swap non-centers (sizes may differ) as
/// long as the scaled-weight objective improves by a factor of 1 - epsilon/k,
/// never letting the center count exceed floor((1+epsilon)k). The solution is
/// bicriteria in the number of centers.
inline OutlierSolution kmeans_out_weighted(const PointSet& ps, const IndexSubset& P,
                                           const WeightFn& w, int k, long long z,
                                           const LocalSearchConfig& cfg) {
  cfg.validate();
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > P.size()) throw std::invalid_argument("k exceeds candidate set");
  if (z < 0) throw std::invalid_argument("negative outlier budget");
  if (z >= w.total()) {
    throw std::invalid_argument("outlier budget consumes the whole instance");
  }

  const int max_centers =
      static_cast<int>(detail::floor_tol((1.0 + cfg.epsilon) * k));

  detail::Rng rng(cfg.seed);
  std::vector<int> init;
  {
    const auto pick = rng.sample_distinct(P.size(), k);
    init.reserve(pick.size());
    for (const int pos : pick) init.push_back(P[pos]);
  }
  std::sort(init.begin(), init.end());
  IndexSubset centers(std::move(init));

  double value = wcost_out(ps, w, centers, z);
  std::vector<double> trace{value};
  bool converged = false;

  const long long cap = cfg.iters_for(k);
  for (long long iter = 0; iter < cap; ++iter) {
    bool found = false;
    double best_value = std::numeric_limits<double>::infinity();
    IndexSubset best_centers;

    const auto& cur = centers.members();
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(P.size() - centers.size()));
    for (const int p : P) {
      if (!centers.contains(p)) rest.push_back(p);
    }

    const int max_q = std::min(cfg.rho_swap, centers.size());
    const int max_u = std::min<int>(cfg.rho_swap, static_cast<int>(rest.size()));
    for (int q = 0; q <= max_q; ++q) {
      for (int u = 0; u <= max_u; ++u) {
        if (q == 0 && u == 0) continue;
        const int new_size = centers.size() - q + u;
        if (new_size < 1 || new_size > max_centers) continue;
        detail::for_each_combination(centers.size(), q, [&](const std::vector<int>& qs) {
          std::vector<bool> removed(cur.size(), false);
          for (const int pos : qs) removed[static_cast<std::size_t>(pos)] = true;
          detail::for_each_combination(static_cast<int>(rest.size()), u,
                                       [&](const std::vector<int>& us) {
            std::vector<int> next;
            next.reserve(static_cast<std::size_t>(new_size));
            for (std::size_t i = 0; i < cur.size(); ++i) {
              if (!removed[i]) next.push_back(cur[i]);
            }
            for (const int pos : us) next.push_back(rest[static_cast<std::size_t>(pos)]);
            IndexSubset cand(std::move(next));
            const double v = wcost_out(ps, w, cand, z);
            if (!found || v < best_value) {
              found = true;
              best_value = v;
              best_centers = std::move(cand);
            }
          });
        });
      }
    }

    if (!found || !(best_value < (1.0 - cfg.epsilon / k) * value)) {
      converged = true;
      break;
    }
    centers = std::move(best_centers);
    value = best_value;
    trace.push_back(value);
  }

  OutlierSolution sol;
  sol.centers = std::move(centers);
  sol.residual = scale_weights(ps, w, sol.centers, z);
  sol.outliers = w.minus(sol.residual);
  sol.value = value;
  sol.trace = std::move(trace);
  sol.converged = converged;
  return sol;
}

}  // namespace kmo
