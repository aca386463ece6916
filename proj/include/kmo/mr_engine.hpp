#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "kmo/detail/rng.hpp"
#include "kmo/point_set.hpp"

namespace kmo {

enum class Variant { basic, improved };
enum class PartitionPolicy { round_robin, seeded_random };

/// Balanced split of the point indices into L subsets; sizes differ by at
/// most one.
struct Partition {
  int L = 1;
  std::vector<int> assignment;  // point index -> subset id

  std::vector<IndexSubset> subsets() const {
    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(L));
    for (int p = 0; p < static_cast<int>(assignment.size()); ++p) {
      buckets[static_cast<std::size_t>(assignment[static_cast<std::size_t>(p)])].push_back(p);
    }
    std::vector<IndexSubset> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.emplace_back(std::move(b));
    return out;
  }
};

inline Partition partition(const PointSet& ps, int L,
                           PartitionPolicy policy = PartitionPolicy::round_robin,
                           std::uint64_t seed = 0) {
  const int n = ps.size();
  if (L < 1 || L > n) throw std::invalid_argument("L outside [1, n]");
  Partition part;
  part.L = L;
  part.assignment.resize(static_cast<std::size_t>(n));
  if (policy == PartitionPolicy::round_robin) {
    for (int p = 0; p < n; ++p) part.assignment[static_cast<std::size_t>(p)] = p % L;
  } else {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) perm[static_cast<std::size_t>(p)] = p;
    detail::Rng rng(seed);
    rng.shuffle(perm.begin(), perm.end());
    for (int j = 0; j < n; ++j) {
      part.assignment[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = j % L;
    }
  }
  return part;
}

/// Per-reducer item accounting for one round. Items count points, coreset
/// entries and broadcast values held simultaneously, not bytes.
struct ReducerTrace {
  std::size_t input_items = 0;
  std::size_t output_items = 0;
  std::size_t peak_items = 0;
};

struct RoundTrace {
  int round = 0;
  std::vector<ReducerTrace> per_reducer;
  /// Footprint of work shared identically by all reducers and evaluated once
  /// by the simulator; reported separately from per-reducer peaks.
  std::size_t shared_items = 0;

  std::size_t max_local() const {
    std::size_t m = 0;
    for (const auto& r : per_reducer) m = std::max(m, r.peak_items);
    return m;
  }
};

/// Failure inside a reducer, tagged with the reducer id.
class reducer_error : public std::runtime_error {
 public:
  reducer_error(int reducer_id, const std::string& what)
      : std::runtime_error("reducer " + std::to_string(reducer_id) + ": " + what),
        reducer_id_(reducer_id) {}
  int reducer() const { return reducer_id_; }

 private:
  int reducer_id_ = 0;
};

template <typename T>
concept ItemCounted = requires(const T& t) {
  { t.items() } -> std::convertible_to<std::size_t>;
};

/// Reducer return value plus the reducer's own peak working-set declaration.
/// The recorded peak is never below max(input, output).
template <ItemCounted Out>
struct Reduced {
  Out value;
  std::size_t peak_items = 0;
};

/// Applies the reducer to every payload independently, recording item counts
/// per reducer. Outputs are identical whether or not reducers run in
/// parallel; reducer failures surface as reducer_error with the lowest
/// failing id.
template <ItemCounted In, typename F>
auto run_round(int round_number, const std::vector<In>& inputs, F&& reducer,
               RoundTrace& trace, bool parallel = false) {
  using Reduction = std::invoke_result_t<F&, const In&, int>;
  using Out = decltype(std::declval<Reduction>().value);
  static_assert(ItemCounted<Out>, "reducer output must expose items()");

  const int count = static_cast<int>(inputs.size());
  trace.round = round_number;
  trace.per_reducer.assign(static_cast<std::size_t>(count), ReducerTrace{});

  std::vector<std::optional<Out>> slots(static_cast<std::size_t>(count));
  std::vector<std::pair<int, std::string>> failures;

  auto work = [&](int i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const std::size_t in_items = inputs[si].items();
    Reduction r = reducer(inputs[si], i);
    const std::size_t out_items = r.value.items();
    trace.per_reducer[si] = ReducerTrace{
        in_items, out_items,
        std::max({r.peak_items, in_items, out_items})};
    slots[si] = std::move(r.value);
  };

  if (!parallel || count <= 1) {
    for (int i = 0; i < count; ++i) {
      try {
        work(i);
      } catch (const std::exception& e) {
        throw reducer_error(i, e.what());
      }
    }
  } else {
    const int workers = std::max(1, std::min<int>(
        count, static_cast<int>(std::thread::hardware_concurrency())));
    std::vector<std::vector<std::pair<int, std::string>>> worker_failures(
        static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      threads.emplace_back([&, t]() {
        for (int i = t; i < count; i += workers) {
          try {
            work(i);
          } catch (const std::exception& e) {
            worker_failures[static_cast<std::size_t>(t)].emplace_back(i, e.what());
          }
        }
      });
    }
    for (auto& th : threads) th.join();
    for (const auto& wf : worker_failures) {
      for (const auto& f : wf) failures.push_back(f);
    }
    if (!failures.empty()) {
      const auto worst = *std::min_element(
          failures.begin(), failures.end(),
          [](const auto& a, const auto& b) { return a.first < b.first; });
      throw reducer_error(worst.first, worst.second);
    }
  }

  std::vector<Out> out;
  out.reserve(static_cast<std::size_t>(count));
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Subset count balancing per-reducer input against the broadcast coreset:
/// the cube root of n/(rho*k + tau*z) for the basic variant, the square root
/// for the improved one, never below 1.
inline int suggest_L(long long n, int k, long long z, double rho, double tau,
                     Variant variant) {
  const double denom = rho * static_cast<double>(k) + tau * static_cast<double>(z);
  if (!(denom > 0.0) || static_cast<double>(n) <= denom) return 1;
  const double q = std::ceil(static_cast<double>(n) / denom);
  const double raw = variant == Variant::basic ? std::cbrt(q) : std::sqrt(q);
  return static_cast<int>(std::max(1LL, std::llround(raw)));
}

}  // namespace kmo
