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

#include "ppmenergy/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ppmenergy/errors.hpp"

namespace ppmenergy::theory {
namespace {

constexpr double kPi = std::numbers::pi;

double separation_at_threshold(double k) { return detectability_threshold(k, 2); }

double ppm_energy_above(std::uint32_t n, double k, double k_aa, double k_ab) {
  const double p_aa = k_aa / (n - 2.0);
  const double p_ab = k_ab / n;
  const double sigma2 = 0.5 * p_aa * (1.0 - p_aa) + 0.5 * p_ab * (1.0 - p_ab);
  const double delta = k_aa - k_ab;
  const double lambda2 = 0.5 * delta + (k_aa + k_ab) / delta;
  return bulk_energy(n, sigma2) + (k + 1.0) + lambda2;
}

}  // namespace

double detectability_threshold(double k, int q) {
  if (!(k > 0.0)) throw ValidationError("k must be positive");
  if (q < 2) throw ValidationError("q must be at least 2");
  return q * std::sqrt(k);
}

bool detectable(const PpmParams& params) {
  return params.separation() > separation_at_threshold(params.k);
}

double lambda2_theory(const PpmParams& params) {
  if (!detectable(params)) return 2.0 * std::sqrt(params.k);
  const double delta = params.separation();
  return 0.5 * delta + (params.k_aa + params.k_ab) / delta;
}

double bulk_energy(std::uint32_t n, double sigma2) {
  return std::pow(static_cast<double>(n), 1.5) * kSemicircleAbsMoment *
         std::sqrt(std::max(sigma2, 0.0));
}

double er_energy_theory(std::uint32_t n, double k) {
  const double p = k / n;
  return bulk_energy(n, p * (1.0 - p)) + k + 1.0;
}

double er_energy_small_p(std::uint32_t n, double k) {
  return n * kSemicircleAbsMoment * std::sqrt(k) * (1.0 - k / (2.0 * n)) + k + 1.0;
}

double ppm_energy_theory(const PpmParams& params) {
  if (detectable(params)) {
    return ppm_energy_above(params.n, params.k, params.k_aa, params.k_ab);
  }
  // Plateau: the value where k_aa - k_ab = 2 sqrt(k) at the same n and k.
  const double half = 0.5 * separation_at_threshold(params.k);
  return ppm_energy_above(params.n, params.k, params.k + half, params.k - half);
}

double sigma2_small_p(const PpmParams& params) {
  const double n = params.n;
  const double delta = params.separation();
  return params.k / n - params.k * params.k / (n * n) - delta * delta / (4.0 * n * n);
}

double ppm_energy_small_p(const PpmParams& params) {
  const double n = params.n;
  const double k = params.k;
  const double delta = params.separation();
  const double bulk = n * kSemicircleAbsMoment * std::sqrt(k) *
                      (1.0 - k / (2.0 * n) - delta * delta / (8.0 * k * n));
  const double lambda2 = 0.5 * delta + (params.k_aa + params.k_ab) / delta;
  return bulk + lambda2 + k + 1.0;
}

double delta_e_expansion(double k, double delta) {
  return 0.5 * delta + 2.0 * k / delta - delta * delta / (3.0 * kPi * std::sqrt(k));
}

double delta_e_offset(double k) { return -std::sqrt(k) * (2.0 - 4.0 / (3.0 * kPi)); }

double delta_e_raw(const PpmParams& params) {
  const double delta = params.separation();
  if (delta == 0.0) return 0.0;
  const double threshold = separation_at_threshold(params.k);
  return delta_e_expansion(params.k, delta > threshold ? delta : threshold);
}

double delta_e_anchored(const PpmParams& params) {
  if (!detectable(params)) return 0.0;
  return delta_e_expansion(params.k, params.separation()) + delta_e_offset(params.k);
}

double wigner_density(double x, double sigma2, std::uint32_t n) {
  if (!(sigma2 > 0.0)) throw ValidationError("sigma2 must be positive");
  const double scale2 = sigma2 * n;
  const double r2 = 4.0 * scale2 - x * x;
  if (r2 <= 0.0) return 0.0;
  return std::sqrt(r2) / (2.0 * kPi * scale2);
}

TheoryPrediction predict(const PpmParams& params, int q) {
  if (q != 2) throw ValidationError("energy predictions are defined only for q = 2");
  TheoryPrediction t;
  t.threshold = detectability_threshold(params.k, q);
  t.detectable = detectable(params);
  t.lambda1_pred = params.k + 1.0;
  t.lambda2_pred = lambda2_theory(params);
  t.bulk_energy_pred = bulk_energy(params.n, params.sigma2);
  t.er_energy_pred = er_energy_theory(params.n, params.k);
  t.ppm_energy_pred = ppm_energy_theory(params);
  t.delta_e_raw = delta_e_raw(params);
  t.delta_e_anchored = delta_e_anchored(params);
  t.offset_at_threshold = delta_e_offset(params.k);
  return t;
}

}  // namespace ppmenergy::theory
