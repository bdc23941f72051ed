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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ppmenergy/ensemble.hpp"

namespace ppmenergy {

std::optional<double> estimate_effective_threshold(const std::vector<GridPointSummary>& points,
                                                   double /*k*/) {
  std::vector<const GridPointSummary*> usable;
  for (const auto& p : points) {
    if (p.count > 0 && std::isfinite(p.mean_lambda2)) usable.push_back(&p);
  }
  if (usable.size() < 2) return std::nullopt;
  std::sort(usable.begin(), usable.end(), [](const auto* a, const auto* b) {
    return a->separation < b->separation;
  });

  // The bulk edge of a finite graph is not 2 sqrt(k): 2 sqrt(k (1 - p)) for
  // dense graphs, higher for sparse ones. The lowest-separation point
  // measures the plateau directly.
  const GridPointSummary& ref = *usable.front();
  const double plateau = ref.mean_lambda2;
  auto exceeds = [&](const GridPointSummary& p) {
    const double se = std::hypot(p.stderr_lambda2, ref.stderr_lambda2);
    return p.mean_lambda2 - plateau > 3.0 * se;
  };

  // First separation from which every larger grid point stays above.
  std::optional<double> found;
  for (std::size_t i = usable.size(); i-- > 1;) {
    if (!exceeds(*usable[i])) break;
    found = usable[i]->separation;
  }
  return found;
}

}  // namespace ppmenergy
