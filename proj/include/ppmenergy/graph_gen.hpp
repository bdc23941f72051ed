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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ppmenergy {

/// Fully resolved two-community planted-partition model.
///
/// Degrees follow the convention k_aa = (n - 2) p_aa, k_ab = n p_ab, so that
/// the expected mean degree is k = (k_aa + k_ab) / 2 exactly. sigma2 is the
/// variance of a uniformly chosen off-diagonal adjacency entry.
struct PpmParams {
  std::uint32_t n = 0;
  double k = 0.0;
  double k_aa = 0.0;
  double k_ab = 0.0;
  double p_aa = 0.0;
  double p_ab = 0.0;
  double sigma2 = 0.0;

  /// k_aa - k_ab, the community-strength coordinate used by sweeps.
  [[nodiscard]] double separation() const noexcept { return k_aa - k_ab; }

  friend bool operator==(const PpmParams&, const PpmParams&) = default;
};

/// Validates (n, k, k_ab) and fills in k_aa = 2k - k_ab and the derived
/// probabilities. Throws ValidationError for odd n, n < 4, k_ab outside
/// [0, 2k] or probabilities outside [0, 1].
[[nodiscard]] PpmParams resolve_params(std::uint32_t n, double k, double k_ab);

/// Parameters describing G(n, p) with p = k / n. Both block probabilities
/// equal p and sigma2 = p (1 - p); k_aa = k_ab = k.
[[nodiscard]] PpmParams er_params(std::uint32_t n, double k);

// `external` marks graphs read from a file or built from explicit edges.
enum class Model : std::uint8_t { ppm, er, external };
enum class Community : std::uint8_t { a = 0, b = 1 };

/// Which sampler to use. Both are exact; they consume randomness
/// differently, so they produce different graphs for the same seed.
enum class Sampler : std::uint8_t {
  pair_loop,       // one Bernoulli draw per unordered pair, O(n^2)
  block_binomial,  // binomial edge count per block, then uniform placement
};

struct Edge {
  std::uint32_t u = 0;  // u < v
  std::uint32_t v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A simple undirected graph with planted labels. Nodes [0, n/2) are in
/// community a, the rest in b. Edges are stored once, with u < v, sorted.
class GraphSample {
 public:
  GraphSample() = default;
  GraphSample(PpmParams params, Model model, std::uint64_t seed,
              std::vector<Edge> edges);

  [[nodiscard]] const PpmParams& params() const noexcept { return params_; }
  [[nodiscard]] Model model() const noexcept { return model_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint32_t n() const noexcept { return params_.n; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }

  [[nodiscard]] Community label(std::uint32_t node) const noexcept {
    return node < params_.n / 2 ? Community::a : Community::b;
  }
  [[nodiscard]] std::vector<Community> labels() const;

  /// Dense n x n adjacency, row-major (equivalently column-major, it is
  /// symmetric), zero diagonal.
  [[nodiscard]] std::vector<double> dense_adjacency() const;

  [[nodiscard]] std::vector<std::uint32_t> degrees() const;

 private:
  PpmParams params_;
  Model model_ = Model::ppm;
  std::uint64_t seed_ = 0;
  std::vector<Edge> edges_;
};

/// Compressed adjacency lists for sparse matrix-vector products.
struct Csr {
  std::uint32_t n = 0;
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<std::uint32_t> targets;

  explicit Csr(const GraphSample& graph);

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
};

[[nodiscard]] GraphSample generate_ppm(const PpmParams& params, std::uint64_t seed,
                                       Sampler sampler = Sampler::pair_loop);

/// G(n, p) with p = k / n. Throws ValidationError if k > n, k < 0 or n < 2.
[[nodiscard]] GraphSample generate_er(std::uint32_t n, double k, std::uint64_t seed,
                                      Sampler sampler = Sampler::pair_loop);

/// Edge counts inside community a, inside b, and between them.
struct BlockCounts {
  std::size_t aa = 0;
  std::size_t bb = 0;
  std::size_t ab = 0;
};
[[nodiscard]] BlockCounts block_counts(const GraphSample& graph);

/// Number of triangles, by neighbour-set intersection.
[[nodiscard]] std::size_t count_triangles(const GraphSample& graph);

// Edge-list format: a header comment line
//   # n=<n> seed=<seed> model=<ppm|er> k=<k> k_aa=<..> k_ab=<..> p_aa=<..> p_ab=<..>
// followed by one "i j" line per edge (0-indexed, i < j, sorted).
void write_edge_list(std::ostream& out, const GraphSample& graph);
void write_edge_list(const std::string& path, const GraphSample& graph);

/// Parses an edge list. Header keys are optional; without an n= key the
/// node count is max index + 1, or `n_hint` when given. Lines starting with
/// '#' other than the header, and blank lines, are ignored. A header with
/// model=ppm (k, k_ab) or model=er (k) restores that model's parameters;
/// anything else yields Model::external. Edges may be in
/// any order and orientation; duplicates and self-loops are rejected.
[[nodiscard]] GraphSample read_edge_list(std::istream& in,
                                         std::optional<std::uint32_t> n_hint = {});
[[nodiscard]] GraphSample read_edge_list(const std::string& path,
                                         std::optional<std::uint32_t> n_hint = {});

/// Builds a graph from arbitrary edges (used by tests and readers).
/// Validates indices, drops nothing: throws on self-loops or duplicates.
[[nodiscard]] GraphSample graph_from_edges(std::uint32_t n,
                                           std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

}  // namespace ppmenergy
