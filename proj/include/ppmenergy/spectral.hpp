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

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ppmenergy/graph_gen.hpp"

namespace ppmenergy {

/// All eigenvalues of an adjacency matrix plus the scalars derived from them.
struct Spectrum {
  std::vector<double> eigenvalues;  // descending by signed value
  double energy = 0.0;              // sum of |lambda|
  double lambda1 = 0.0;             // largest magnitude (positive on a tie)
  double lambda2_alg = 0.0;         // second-largest signed eigenvalue
  double lambda2_mag = 0.0;         // second in the |lambda| ordering
  std::size_t n = 0;
  std::size_t m = 0;                // edge count of the source graph
};

/// Builds a Spectrum from raw eigenvalues (any order).
[[nodiscard]] Spectrum make_spectrum(std::vector<double> eigenvalues, std::size_t edge_count);

/// Dense symmetric eigensolve of the adjacency matrix (LAPACK dsyevr,
/// eigenvalues only). Throws NumericalError, naming the graph seed, if the
/// solver does not converge.
[[nodiscard]] Spectrum full_spectrum(const GraphSample& graph);

/// Sum of |lambda_i|, i.e. the nuclear norm of the adjacency matrix.
[[nodiscard]] double graph_energy(const Spectrum& spectrum) noexcept;

/// Caps the BLAS/LAPACK worker threads used by the eigensolver. The
/// ensemble runner sets this to 1 so that its own workers do not
/// oversubscribe the machine.
void set_eigensolver_threads(int threads);

struct SpectralTolerances {
  double trace_rel = 1e-8;   // |sum lambda| < trace_rel * n * max|lambda|
  double moment_rel = 1e-6;  // |sum lambda^2 - 2m| < moment_rel * (2m + 1)
};

struct IdentityReport {
  double trace = 0.0;
  double second_moment = 0.0;
  double trace_tolerance = 0.0;
  double moment_tolerance = 0.0;
  bool trace_ok = false;
  bool moment_ok = false;
  bool energy_bounds_ok = false;  // sqrt(2m) <= E <= sqrt(2mn)

  [[nodiscard]] bool ok() const noexcept { return trace_ok && moment_ok && energy_bounds_ok; }
};

[[nodiscard]] IdentityReport check_identities(const Spectrum& spectrum,
                                              const SpectralTolerances& tol = {});

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

struct BulkStats {
  double bulk_edge_pred = 0.0;  // 2 sqrt(sigma2 n)
  std::size_t outlier_count = 0;
  Histogram histogram;
};

inline constexpr std::size_t kDefaultBins = 101;

/// Histogram over [min lambda, max lambda] with `bins` equal-width bins; the
/// last bin is closed on the right. Counts sum to the number of eigenvalues.
[[nodiscard]] Histogram histogram(std::span<const double> values, std::size_t bins = kDefaultBins);

/// Counts eigenvalues strictly outside the predicted semicircle edge
/// +-2 sqrt(sigma2 n). A relative slack of 1e-9 keeps round-off zeros of an
/// empty graph from counting as outliers.
[[nodiscard]] BulkStats bulk_stats(const Spectrum& spectrum, const PpmParams& params,
                                   std::size_t bins = kDefaultBins);

/// Largest `count` algebraic eigenvalues of the adjacency matrix, descending,
/// by Lanczos iteration with full reorthogonalization on the sparse
/// adjacency. Used for lambda_2-only sweeps where a dense solve is
/// unaffordable. Converges to a residual of `tol` * max(1, |lambda|).
struct LanczosOptions {
  std::size_t max_iterations = 600;
  std::size_t check_every = 10;
  double tol = 1e-10;
  std::uint64_t start_seed = 0x5eed;
};
[[nodiscard]] std::vector<double> leading_eigenvalues(const GraphSample& graph, std::size_t count,
                                                      const LanczosOptions& options = {});

// CSV exports. Numbers use 12 significant digits.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
void write_histogram_csv(std::ostream& out, const Histogram& hist);

}  // namespace ppmenergy
