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
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ppmenergy/graph_gen.hpp"
#include "ppmenergy/theory.hpp"

namespace ppmenergy {

/// What each instantiation computes.
///   energy  - dense spectrum; energy, paired baseline and Delta E
///   lambda2 - Lanczos lambda_2 only; no energy, no ER baseline
///   both    - dense spectrum; everything
enum class SweepMode : std::uint8_t { energy, lambda2, both };

[[nodiscard]] const char* to_string(SweepMode mode) noexcept;
[[nodiscard]] SweepMode parse_sweep_mode(const std::string& text);

struct SweepSpec {
  std::uint32_t n = 1000;
  double k = 50.0;
  std::vector<double> k_ab_grid;  // empty means default_grid(k)
  std::size_t reps = 1000;
  std::uint64_t master_seed = 1;
  SweepMode mode = SweepMode::both;
  // pair_loop couples replicates across grid points (common random
  // numbers); block_binomial is faster but only weakly coupled.
  Sampler sampler = Sampler::pair_loop;
  // Execution knobs; they never change results.
  unsigned threads = 1;
  int eigensolver_threads = 1;
  double max_failure_rate = 1e-3;
};

/// Integer k_ab values from floor(k) down to 0, i.e. ascending k_aa - k_ab.
[[nodiscard]] std::vector<double> default_grid(double k);

/// Desk-scale replicate count: 2000 for n <= 500, 1000 above.
[[nodiscard]] std::size_t default_reps(std::uint32_t n) noexcept;

/// Throws ValidationError unless reps >= 1 and every grid value resolves.
void validate(const SweepSpec& spec);

/// Per-instantiation outcome. NaN marks quantities the mode does not
/// compute; `ok` is false when the eigensolver failed.
struct InstanceResult {
  double energy = 0.0;
  double lambda2 = 0.0;
  bool ok = false;
};

struct Failure {
  std::string stream;  // "ppm" or "baseline"
  std::size_t grid_index = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct GridPointSummary {
  double k_ab = 0.0;
  double separation = 0.0;  // k_aa - k_ab
  double mean_energy = 0.0;
  double stderr_energy = 0.0;
  double mean_lambda2 = 0.0;
  double stderr_lambda2 = 0.0;
  double mean_delta_e = 0.0;    // mean over reps of E_ppm(rep) - E_baseline(rep)
  double stderr_delta_e = 0.0;  // standard error of those paired differences
  std::size_t count = 0;
  theory::TheoryPrediction theory;
};

struct SweepSummary {
  SweepSpec spec;
  std::vector<GridPointSummary> points;
  double mean_er_energy = 0.0;
  double stderr_er_energy = 0.0;
  std::size_t er_count = 0;
  std::optional<double> effective_threshold;
  std::vector<Failure> failures;
  // Raw per-instantiation results, instances[grid_index][rep] and er[rep].
  std::vector<std::vector<InstanceResult>> instances;
  std::vector<InstanceResult> er_instances;
  double wall_seconds = 0.0;
};

/// Seed of replicate `rep`. Every grid point and the baseline use the same
/// seed for a given rep, so with the pair-loop sampler the graphs of one
/// replicate share their per-pair uniforms and differ only where the block
/// probabilities differ.
[[nodiscard]] std::uint64_t replicate_seed(std::uint64_t master, std::size_t rep) noexcept;

/// The ER reference of the sweep: the PPM at k_ab = k, i.e. G(n, p) with
/// block probabilities k/(n-2) and k/n, whose mean degree is exactly k.
[[nodiscard]] PpmParams baseline_params(std::uint32_t n, double k);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs the sweep on spec.threads workers. Results are aggregated in
/// (grid, rep) order after all work completes, so the summary is
/// bit-identical for any thread count. Eigensolver failures are logged and
/// excluded; a failure rate above spec.max_failure_rate throws
/// NumericalError.
[[nodiscard]] SweepSummary run_sweep(const SweepSpec& spec, const ProgressFn& progress = {});

/// Energies of spec.reps ER reference graphs (baseline_params) seeded by
/// replicate_seed, i.e. paired by rep index with the PPM instantiations.
/// Failed reps are empty.
[[nodiscard]] std::vector<std::optional<double>> paired_er_baseline(const SweepSpec& spec);

/// Smallest k_aa - k_ab from which mean lambda_2 stays above the plateau by
/// more than 3 pooled standard errors at every larger grid point. The
/// plateau is the mean lambda_2 at the lowest separation on the grid; the
/// pooled error is the two standard errors in quadrature. Empty when no
/// such point exists or fewer than two points carry lambda_2.
[[nodiscard]] std::optional<double> estimate_effective_threshold(
    const std::vector<GridPointSummary>& points, double k);

// Summary CSV columns:
//   k_aa_minus_k_ab,k_ab,mean_energy,stderr_energy,mean_lambda2,stderr_lambda2,
//   mean_delta_e,stderr_delta_e,count,theory_lambda2,theory_delta_e_raw,
//   theory_delta_e_anchored,theory_energy
// 12 significant digits; quantities a mode does not compute print as "nan".
void write_summary_csv(std::ostream& out, const SweepSummary& summary);

/// Run manifest: the full spec, version, wall-clock, failure log and the
/// effective-threshold estimate.
[[nodiscard]] nlohmann::json manifest_json(const SweepSummary& summary);

[[nodiscard]] nlohmann::json spec_to_json(const SweepSpec& spec);
[[nodiscard]] SweepSpec spec_from_json(const nlohmann::json& j);

}  // namespace ppmenergy
