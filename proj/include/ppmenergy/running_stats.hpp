// Copyright 2026 The ppmenergy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace ppmenergy {

/// Welford mean/variance accumulator. merge() combines partial
/// accumulators (Chan et al.), so per-worker partials can be reduced in any
/// grouping.
class RunningStats {
 public:
  void push(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double total = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
  }

  [[nodiscard]] std::size_t count() const noexcept { return n_; }

  [[nodiscard]] double mean() const noexcept {
    return n_ == 0 ? std::numeric_limits<double>::quiet_NaN() : mean_;
  }

  /// Sample variance (n - 1 denominator).
  [[nodiscard]] double variance() const noexcept {
    return n_ < 2 ? std::numeric_limits<double>::quiet_NaN()
                  : m2_ / static_cast<double>(n_ - 1);
  }

  [[nodiscard]] double stddev() const noexcept { return std::sqrt(variance()); }

  /// Standard error of the mean; 0 for a single sample.
  [[nodiscard]] double stderr_mean() const noexcept {
    if (n_ == 0) return std::numeric_limits<double>::quiet_NaN();
    if (n_ == 1) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n_));
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace ppmenergy
