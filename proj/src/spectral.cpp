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

#include "ppmenergy/spectral.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ppmenergy/errors.hpp"
#include "ppmenergy/rng.hpp"

namespace ppmenergy {
namespace {

std::string describe(const GraphSample& graph) {
  std::ostringstream os;
  os << std::setprecision(12) << "n=" << graph.n() << " seed=" << graph.seed()
     << " k=" << graph.params().k << " k_ab=" << graph.params().k_ab;
  return os.str();
}

double dot(std::span<const double> a, std::span<const double> b) {
  return cblas_ddot(static_cast<int>(a.size()), a.data(), 1, b.data(), 1);
}

}  // namespace

Spectrum make_spectrum(std::vector<double> eigenvalues, std::size_t edge_count) {
  Spectrum s;
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  s.n = eigenvalues.size();
  s.m = edge_count;
  s.energy = 0.0;
  for (double x : eigenvalues) s.energy += std::abs(x);

  if (!eigenvalues.empty()) {
    std::vector<double> by_magnitude = eigenvalues;
    std::stable_sort(by_magnitude.begin(), by_magnitude.end(), [](double a, double b) {
      if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
      return a > b;
    });
    s.lambda1 = by_magnitude[0];
    s.lambda2_mag = by_magnitude.size() > 1 ? by_magnitude[1] : 0.0;
    s.lambda2_alg = eigenvalues.size() > 1 ? eigenvalues[1] : 0.0;
  }
  s.eigenvalues = std::move(eigenvalues);
  return s;
}

Spectrum full_spectrum(const GraphSample& graph) {
  const auto n = static_cast<lapack_int>(graph.n());
  if (n == 0) return make_spectrum({}, 0);
  std::vector<double> a = graph.dense_adjacency();
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  double unused = 0.0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0,
                     &found, w.data(), &unused, 1, support.data());
  if (info != 0 || found != n) {
    throw NumericalError("dsyevr failed (info=" + std::to_string(info) + ") for " +
                         describe(graph));
  }
  return make_spectrum(std::move(w), graph.edge_count());
}

double graph_energy(const Spectrum& spectrum) noexcept {
  double e = 0.0;
  for (double x : spectrum.eigenvalues) e += std::abs(x);
  return e;
}

void set_eigensolver_threads(int threads) { openblas_set_num_threads(std::max(1, threads)); }

IdentityReport check_identities(const Spectrum& spectrum, const SpectralTolerances& tol) {
  IdentityReport r;
  double max_abs = 0.0;
  for (double x : spectrum.eigenvalues) {
    r.trace += x;
    r.second_moment += x * x;
    max_abs = std::max(max_abs, std::abs(x));
  }
  const double two_m = 2.0 * static_cast<double>(spectrum.m);
  r.trace_tolerance = tol.trace_rel * static_cast<double>(spectrum.n) * std::max(max_abs, 1.0);
  r.moment_tolerance = tol.moment_rel * (two_m + 1.0);
  r.trace_ok = std::abs(r.trace) < r.trace_tolerance;
  r.moment_ok = std::abs(r.second_moment - two_m) < r.moment_tolerance;
  const double energy = graph_energy(spectrum);
  const double slack = 1e-9 * (energy + 1.0);
  r.energy_bounds_ok = energy + slack >= std::sqrt(two_m) &&
                       energy <= std::sqrt(two_m * static_cast<double>(spectrum.n)) + slack;
  return r;
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
  Histogram h;
  bins = std::max<std::size_t>(bins, 1);
  h.counts.assign(bins, 0);
  if (values.empty()) {
    h.edges.assign(bins + 1, 0.0);
    return h;
  }
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  for (double x : values) {
    auto idx = static_cast<std::size_t>((x - lo) / width);
    ++h.counts[std::min(idx, bins - 1)];
  }
  return h;
}

BulkStats bulk_stats(const Spectrum& spectrum, const PpmParams& params, std::size_t bins) {
  BulkStats b;
  b.bulk_edge_pred = 2.0 * std::sqrt(params.sigma2 * static_cast<double>(spectrum.n));
  const double cutoff = b.bulk_edge_pred * (1.0 + 1e-9) + 1e-9;
  for (double x : spectrum.eigenvalues) {
    if (std::abs(x) > cutoff) ++b.outlier_count;
  }
  b.histogram = histogram(spectrum.eigenvalues, bins);
  return b;
}

std::vector<double> leading_eigenvalues(const GraphSample& graph, std::size_t count,
                                        const LanczosOptions& options) {
  const std::size_t n = graph.n();
  count = std::min(count, n);
  if (count == 0) return {};
  // Small problems: the dense solver is cheaper and exact.
  if (n <= 64) {
    auto s = full_spectrum(graph);
    s.eigenvalues.resize(count);
    return s.eigenvalues;
  }

  const Csr adjacency(graph);
  const std::size_t max_steps = std::min(options.max_iterations, n);
  std::vector<double> basis((max_steps + 1) * n);
  auto column = [&](std::size_t j) { return std::span<double>(basis.data() + j * n, n); };
  std::vector<double> alpha;
  std::vector<double> beta;
  Xoshiro256 rng(options.start_seed);

  auto random_unit_orthogonal = [&](std::size_t j) -> bool {
    auto v = column(j);
    for (auto& x : v) x = rng.uniform() - 0.5;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double c = dot(column(i), v);
        cblas_daxpy(static_cast<int>(n), -c, column(i).data(), 1, v.data(), 1);
      }
    }
    const double norm = cblas_dnrm2(static_cast<int>(n), v.data(), 1);
    if (norm < 1e-8) return false;
    cblas_dscal(static_cast<int>(n), 1.0 / norm, v.data(), 1);
    return true;
  };
  random_unit_orthogonal(0);

  const double scale = std::max(1.0, std::sqrt(2.0 * static_cast<double>(graph.edge_count())));
  std::vector<double> w(n);
  std::vector<double> coeffs(max_steps + 1);
  std::vector<double> d;
  std::vector<double> e;
  std::vector<double> z;

  for (std::size_t j = 0; j < max_steps; ++j) {
    adjacency.multiply(column(j), w);
    alpha.push_back(dot(column(j), w));
    // Full reorthogonalization, two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      const auto rows = static_cast<int>(j + 1);
      cblas_dgemv(CblasColMajor, CblasTrans, static_cast<int>(n), rows, 1.0, basis.data(),
                  static_cast<int>(n), w.data(), 1, 0.0, coeffs.data(), 1);
      cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(n), rows, -1.0, basis.data(),
                  static_cast<int>(n), coeffs.data(), 1, 1.0, w.data(), 1);
    }
    double b = cblas_dnrm2(static_cast<int>(n), w.data(), 1);
    const bool last = j + 1 == max_steps;
    bool exhausted = false;
    if (b < 1e-10 * scale) {
      // Invariant subspace: continue from a fresh direction so repeated
      // eigenvalues are still found.
      b = 0.0;
      if (last || !random_unit_orthogonal(j + 1)) exhausted = true;
    } else if (!last) {
      auto next = column(j + 1);
      for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
    }
    beta.push_back(b);

    const std::size_t steps = j + 1;
    if (steps < count || (b == 0.0 && !exhausted)) continue;
    if (steps % options.check_every != 0 && !last && !exhausted) continue;

    d.assign(alpha.begin(), alpha.end());
    e.assign(beta.begin(), beta.end() - 1);
    e.push_back(0.0);
    z.assign(steps * steps, 0.0);
    const lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', static_cast<lapack_int>(steps),
                                          d.data(), e.data(), z.data(),
                                          static_cast<lapack_int>(steps));
    if (info != 0) {
      throw NumericalError("dstev failed in Lanczos for " + describe(graph));
    }
    bool converged = true;
    for (std::size_t r = 0; r < count; ++r) {
      const std::size_t col = steps - 1 - r;
      const double theta = d[col];
      const double residual = std::abs(b * z[col * steps + steps - 1]);
      if (residual > options.tol * std::max(1.0, std::abs(theta))) converged = false;
    }
    if (converged || exhausted || (last && steps == n)) {
      std::vector<double> out(count);
      for (std::size_t r = 0; r < count; ++r) out[r] = d[steps - 1 - r];
      return out;
    }
  }
  throw NumericalError("Lanczos did not converge for " + describe(graph));
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "index,eigenvalue\n" << std::setprecision(12);
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    out << i << ',' << spectrum.eigenvalues[i] << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_left,bin_right,count\n" << std::setprecision(12);
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << hist.edges[i] << ',' << hist.edges[i + 1] << ',' << hist.counts[i] << '\n';
  }
}

}  // namespace ppmenergy
