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

#include <cstdint>

#include "ppmenergy/graph_gen.hpp"

namespace ppmenergy::theory {

/// 8 / (3 pi): integral of |x| against the unit-variance semicircle.
inline constexpr double kSemicircleAbsMoment = 8.0 / (3.0 * 3.14159265358979323846);

/// Closed-form predictions for one parameter point (two communities).
struct TheoryPrediction {
  double threshold = 0.0;            // 2 sqrt(k)
  bool detectable = false;           // k_aa - k_ab > threshold
  double lambda1_pred = 0.0;         // k + 1
  double lambda2_pred = 0.0;         // outlier formula above threshold, 2 sqrt(k) below
  double bulk_energy_pred = 0.0;     // n^{3/2} (8/3pi) sqrt(sigma2)
  double er_energy_pred = 0.0;       // G(n, k/n) energy
  double ppm_energy_pred = 0.0;      // plateau-clamped below threshold
  double delta_e_raw = 0.0;          // small-p expansion of E_ppm - E_er
  double delta_e_anchored = 0.0;     // raw minus its threshold value, 0 below
  double offset_at_threshold = 0.0;  // -sqrt(k) (2 - 4/(3pi))
};

/// q sqrt(k). Valid for any number of equal communities q >= 2.
[[nodiscard]] double detectability_threshold(double k, int q = 2);

[[nodiscard]] bool detectable(const PpmParams& params);

/// Second eigenvalue: (k_aa-k_ab)/2 + (k_aa+k_ab)/(k_aa-k_ab) above the
/// threshold, 2 sqrt(k) at and below it.
[[nodiscard]] double lambda2_theory(const PpmParams& params);

/// Bulk (semicircle) part of the energy for entry variance sigma2.
[[nodiscard]] double bulk_energy(std::uint32_t n, double sigma2);

/// n^{3/2} (8/3pi) sqrt(p(1-p)) + k + 1 with p = k/n.
[[nodiscard]] double er_energy_theory(std::uint32_t n, double k);

/// Small-p form: n (8/3pi) sqrt(k) (1 - k/(2n)) + k + 1.
[[nodiscard]] double er_energy_small_p(std::uint32_t n, double k);

/// Bulk + lambda1 + lambda2 above threshold. At and below threshold the
/// value at k_aa - k_ab = 2 sqrt(k) (same n and k) is returned.
[[nodiscard]] double ppm_energy_theory(const PpmParams& params);

/// sigma2 ~ k/n - k^2/n^2 - (k_aa - k_ab)^2 / (4 n^2).
[[nodiscard]] double sigma2_small_p(const PpmParams& params);

/// Small-p form of the PPM energy (no plateau clamp; only meaningful above
/// threshold).
[[nodiscard]] double ppm_energy_small_p(const PpmParams& params);

/// (k_aa - k_ab)/2 + 2k/(k_aa - k_ab) - (k_aa - k_ab)^2 / (3 pi sqrt(k)),
/// evaluated at separation `delta` for mean degree k.
[[nodiscard]] double delta_e_expansion(double k, double delta);

/// -sqrt(k) (2 - 4/(3pi)). Adding it to the expansion zeroes it at the
/// threshold.
[[nodiscard]] double delta_e_offset(double k);

/// Expansion above threshold, its threshold value at and below threshold,
/// and exactly 0 when k_aa == k_ab.
[[nodiscard]] double delta_e_raw(const PpmParams& params);

/// delta_e_raw + offset above threshold, 0 at and below threshold.
[[nodiscard]] double delta_e_anchored(const PpmParams& params);

/// Semicircle density of the unscaled eigenvalues of an n x n matrix whose
/// off-diagonal entries have variance sigma2. Integrates to 1 over
/// |x| < 2 sqrt(sigma2 n).
[[nodiscard]] double wigner_density(double x, double sigma2, std::uint32_t n);

/// All predictions. Throws ValidationError when q != 2, since the energy
/// formulas exist only for two communities.
[[nodiscard]] TheoryPrediction predict(const PpmParams& params, int q = 2);

}  // namespace ppmenergy::theory
