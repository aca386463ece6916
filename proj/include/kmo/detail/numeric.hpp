#pragma once

#include <cmath>
#include <cstdint>

namespace kmo::detail {

/// Neumaier-compensated accumulator. Cost sums mix squared distances spanning
/// many magnitudes; the verifiers compare such sums against tight targets, so
/// every cost path accumulates through this.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Ceiling with a relative tolerance so products like 1.1 * 10 that land one
/// ulp above an integer do not round up twice.
inline long long ceil_tol(double v) {
  return static_cast<long long>(
      std::ceil(v - 1e-9 * std::max(1.0, std::abs(v))));
}

/// Floor with the matching tolerance in the other direction.
inline long long floor_tol(double v) {
  return static_cast<long long>(
      std::floor(v + 1e-9 * std::max(1.0, std::abs(v))));
}

}  // namespace kmo::detail
