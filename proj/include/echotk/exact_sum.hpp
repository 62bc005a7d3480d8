// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace echotk {

// Exact floating-point accumulator (Shewchuk partials, same scheme as
// Python's math.fsum). value() is the correctly rounded sum of every term
// added so far, independent of insertion order. That order independence is
// what lets the streaming neighborhood averages, the per-channel totals
// fast path, and the materialized-projection oracle agree bit for bit.
class ExactSum {
 public:
  ExactSum() = default;

  void add(double x) {
    std::size_t used = 0;
    for (std::size_t i = 0; i < partials_.size(); ++i) {
      double y = partials_[i];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[used++] = lo;
      x = hi;
    }
    partials_.resize(used);
    partials_.push_back(x);
  }

  void subtract(double x) { add(-x); }

  void merge(const ExactSum& other) {
    for (double v : other.partials_) add(v);
  }

  // Correctly rounded (round-half-even) value of the exact sum.
  double value() const {
    if (partials_.empty()) return 0.0;
    std::size_t n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Half-way case: the discarded tail decides the rounding direction.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y2 = lo * 2.0;
      const double x2 = hi + y2;
      if (y2 == x2 - hi) hi = x2;
    }
    return hi;
  }

  void reset() { partials_.clear(); }

 private:
  std::vector<double> partials_;  // nonoverlapping, increasing magnitude
};

inline double exact_mean(const ExactSum& sum, std::size_t count) {
  return sum.value() / static_cast<double>(count);
}

}  // namespace echotk
