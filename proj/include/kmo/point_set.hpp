#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmo/detail/rng.hpp"

namespace kmo {

/// Immutable point collection with a metric. Geometry is either explicit
/// coordinates under the Euclidean distance or a full distance matrix.
/// Construction validates metric axioms; for the matrix form the triangle
/// inequality is checked on every triple when n <= 512 and on 10000 random
/// triples otherwise. Instances are safe to share across threads.
class PointSet {
 public:
  static PointSet from_coords(int dim, std::vector<double> coords) {
    if (dim < 1) throw std::invalid_argument("point dimension must be >= 1");
    if (coords.empty() || coords.size() % static_cast<std::size_t>(dim) != 0) {
      throw std::invalid_argument("coordinate data does not match dimension");
    }
    for (double v : coords) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
    }
    PointSet ps;
    ps.n_ = static_cast<int>(coords.size() / static_cast<std::size_t>(dim));
    ps.dim_ = dim;
    ps.coords_ = std::move(coords);
    return ps;
  }

  static PointSet from_distance_matrix(int n, std::vector<double> dmat) {
    if (n < 1) throw std::invalid_argument("distance matrix needs n >= 1");
    if (dmat.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
      throw std::invalid_argument("distance matrix size is not n*n");
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = dmat[idx(i, j, n)];
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite distance");
        if (v < 0.0) throw std::invalid_argument("negative distance");
      }
      if (std::abs(dmat[idx(i, i, n)]) > 1e-12) {
        throw std::invalid_argument("distance matrix diagonal must be zero");
      }
      dmat[idx(i, i, n)] = 0.0;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double a = dmat[idx(i, j, n)];
        const double b = dmat[idx(j, i, n)];
        if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)})) {
          throw std::invalid_argument("distance matrix is not symmetric");
        }
        dmat[idx(j, i, n)] = a;  // canonicalize so dist() is exactly symmetric
      }
    }
    validate_triangle(n, dmat);
    PointSet ps;
    ps.n_ = n;
    ps.dmat_ = std::move(dmat);
    return ps;
  }

  int size() const { return n_; }
  bool euclidean() const { return !coords_.empty(); }
  int dim() const { return dim_; }

  double coord(int p, int d) const {
    return coords_[static_cast<std::size_t>(p) * static_cast<std::size_t>(dim_) +
                   static_cast<std::size_t>(d)];
  }

  double dist(int p, int q) const {
    check_index(p);
    check_index(q);
    if (!coords_.empty()) {
      double s = 0.0;
      const std::size_t a = static_cast<std::size_t>(p) * static_cast<std::size_t>(dim_);
      const std::size_t b = static_cast<std::size_t>(q) * static_cast<std::size_t>(dim_);
      for (int d = 0; d < dim_; ++d) {
        const double diff = coords_[a + static_cast<std::size_t>(d)] -
                            coords_[b + static_cast<std::size_t>(d)];
        s += diff * diff;
      }
      return std::sqrt(s);
    }
    return dmat_[idx(p, q, n_)];
  }

 private:
  PointSet() = default;

  static std::size_t idx(int i, int j, int n) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(j);
  }

  void check_index(int p) const {
    if (p < 0 || p >= n_) throw std::out_of_range("point index out of range");
  }

  static void check_triple(const std::vector<double>& m, int n, int i, int j, int t) {
    const double lhs = m[idx(i, j, n)];
    const double rhs = m[idx(i, t, n)] + m[idx(t, j, n)];
    if (lhs > rhs + 1e-9 * std::max(1.0, rhs)) {
      throw std::invalid_argument(
          "triangle inequality violated on triple (" + std::to_string(i) + ", " +
          std::to_string(j) + ", " + std::to_string(t) + ")");
    }
  }

  static void validate_triangle(int n, const std::vector<double>& m) {
    if (n <= 512) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          for (int t = 0; t < n; ++t) check_triple(m, n, i, j, t);
        }
      }
      return;
    }
    detail::Rng rng(0x7c1a9 ^ static_cast<std::uint64_t>(n));
    for (int s = 0; s < 10000; ++s) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      check_triple(m, n, i, j, t);
    }
  }

  int n_ = 0;
  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> dmat_;
};

/// Sorted set of point indices without duplicates.
class IndexSubset {
 public:
  IndexSubset() = default;

  explicit IndexSubset(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i] < 0) throw std::invalid_argument("negative point index");
      if (i > 0 && members_[i] == members_[i - 1]) {
        throw std::invalid_argument("duplicate point index in subset");
      }
    }
  }

  IndexSubset(std::initializer_list<int> members)
      : IndexSubset(std::vector<int>(members)) {}

  static IndexSubset full(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    IndexSubset s;
    s.members_ = std::move(v);
    return s;
  }

  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  const std::vector<int>& members() const { return members_; }
  int operator[](int i) const { return members_[static_cast<std::size_t>(i)]; }

  bool contains(int p) const {
    return std::binary_search(members_.begin(), members_.end(), p);
  }

  /// Position of p among the members, or -1.
  int position(int p) const {
    const auto it = std::lower_bound(members_.begin(), members_.end(), p);
    if (it == members_.end() || *it != p) return -1;
    return static_cast<int>(it - members_.begin());
  }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool operator==(const IndexSubset&) const = default;

  void check_against(const PointSet& ps) const {
    if (!members_.empty() && members_.back() >= ps.size()) {
      throw std::out_of_range("subset member outside point set");
    }
  }

 private:
  std::vector<int> members_;
};

struct WeightEntry {
  int index = 0;
  long long weight = 0;
  bool operator==(const WeightEntry&) const = default;
};

/// Nonnegative integer weights keyed by point index. Indices absent from the
/// entry list carry weight zero. Entries stay sorted by index so that every
/// weighted sum runs in the same order.
class WeightFn {
 public:
  WeightFn() = default;

  static WeightFn unit(const IndexSubset& domain) {
    WeightFn w;
    w.entries_.reserve(static_cast<std::size_t>(domain.size()));
    for (int p : domain) w.entries_.push_back({p, 1});
    return w;
  }

  static WeightFn from_entries(std::vector<WeightEntry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const WeightEntry& a, const WeightEntry& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].weight < 0) throw std::invalid_argument("negative weight");
      if (i > 0 && entries[i].index == entries[i - 1].index) {
        throw std::invalid_argument("duplicate index in weight function");
      }
    }
    WeightFn w;
    w.entries_ = std::move(entries);
    return w;
  }

  const std::vector<WeightEntry>& entries() const { return entries_; }

  long long at(int p) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), p,
        [](const WeightEntry& e, int v) { return e.index < v; });
    if (it == entries_.end() || it->index != p) return 0;
    return it->weight;
  }

  long long total() const {
    long long t = 0;
    for (const auto& e : entries_) t += e.weight;
    return t;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const {
    std::size_t c = 0;
    for (const auto& e : entries_) c += (e.weight > 0);
    return c;
  }

  /// Pointwise difference; throws if any weight would go negative.
  WeightFn minus(const WeightFn& other) const {
    WeightFn out = *this;
    for (const auto& e : other.entries_) {
      if (e.weight == 0) continue;
      const auto it = std::lower_bound(
          out.entries_.begin(), out.entries_.end(), e.index,
          [](const WeightEntry& a, int v) { return a.index < v; });
      if (it == out.entries_.end() || it->index != e.index || it->weight < e.weight) {
        throw std::invalid_argument("weight subtraction below zero");
      }
      it->weight -= e.weight;
    }
    return out;
  }

  WeightFn plus(const WeightFn& other) const { return merge(other, MergeOp::add); }
  WeightFn pointwise_max(const WeightFn& other) const { return merge(other, MergeOp::max); }

  bool operator==(const WeightFn&) const = default;

 private:
  enum class MergeOp { add, max };

  WeightFn merge(const WeightFn& other, MergeOp op) const {
    WeightFn out;
    out.entries_.reserve(entries_.size() + other.entries_.size());
    std::size_t i = 0, j = 0;
    while (i < entries_.size() || j < other.entries_.size()) {
      if (j == other.entries_.size() ||
          (i < entries_.size() && entries_[i].index < other.entries_[j].index)) {
        out.entries_.push_back(entries_[i++]);
      } else if (i == entries_.size() || other.entries_[j].index < entries_[i].index) {
        out.entries_.push_back(other.entries_[j++]);
      } else {
        const long long a = entries_[i].weight;
        const long long b = other.entries_[j].weight;
        out.entries_.push_back(
            {entries_[i].index, op == MergeOp::add ? a + b : std::max(a, b)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<WeightEntry> entries_;
};

}  // namespace kmo
