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

#include "ppmenergy/graph_gen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "ppmenergy/errors.hpp"
#include "ppmenergy/rng.hpp"

namespace ppmenergy {
namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::string fmt_num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

const char* model_name(Model m) {
  switch (m) {
    case Model::ppm: return "ppm";
    case Model::er: return "er";
    case Model::external: return "external";
  }
  return "external";
}

// Uniformly chosen subset of `count` indices out of [0, total), as a bitmap.
// Floyd's algorithm; selects the complement when that is smaller.
std::vector<std::uint8_t> choose_subset(std::uint64_t total, std::uint64_t count,
                                        Xoshiro256& rng) {
  const bool complement = count > total / 2;
  const std::uint64_t picks = complement ? total - count : count;
  std::vector<std::uint8_t> mask(total, complement ? 1 : 0);
  const std::uint8_t mark = complement ? 0 : 1;
  for (std::uint64_t j = total - picks; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (mask[t] == mark) {
      mask[j] = mark;
    } else {
      mask[t] = mark;
    }
  }
  return mask;
}

std::uint64_t draw_binomial(std::uint64_t trials, double p, Xoshiro256& rng) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(static_cast<std::int64_t>(trials), p);
  return static_cast<std::uint64_t>(dist(rng));
}

std::vector<Edge> sample_pair_loop(std::uint32_t n, double p_aa, double p_ab,
                                   Xoshiro256& rng) {
  const std::uint32_t half = n / 2;
  std::vector<Edge> edges;
  const double expected = p_aa * half * (half - 1.0) + p_ab * half * (n - half);
  edges.reserve(static_cast<std::size_t>(expected * 1.1) + 16);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const bool same = (i < half) == (j < half);
      if (rng.uniform() < (same ? p_aa : p_ab)) edges.push_back({i, j});
    }
  }
  return edges;
}

// Pairs inside a community of `size` nodes starting at `first`.
void sample_within(std::uint32_t first, std::uint32_t size, double p, Xoshiro256& rng,
                   std::vector<Edge>& edges) {
  const std::uint64_t total = std::uint64_t{size} * (size - (size > 0 ? 1 : 0)) / 2;
  const std::uint64_t count = draw_binomial(total, p, rng);
  if (count == 0) return;
  const auto mask = choose_subset(total, count, rng);
  std::uint64_t idx = 0;
  for (std::uint32_t i = 0; i < size; ++i) {
    for (std::uint32_t j = i + 1; j < size; ++j, ++idx) {
      if (mask[idx]) edges.push_back({first + i, first + j});
    }
  }
}

void sample_between(std::uint32_t half, std::uint32_t other, double p, Xoshiro256& rng,
                    std::vector<Edge>& edges) {
  const std::uint64_t total = std::uint64_t{half} * other;
  const std::uint64_t count = draw_binomial(total, p, rng);
  if (count == 0) return;
  const auto mask = choose_subset(total, count, rng);
  std::uint64_t idx = 0;
  for (std::uint32_t i = 0; i < half; ++i) {
    for (std::uint32_t j = 0; j < other; ++j, ++idx) {
      if (mask[idx]) edges.push_back({i, half + j});
    }
  }
}

std::vector<Edge> sample_block_binomial(std::uint32_t n, double p_aa, double p_ab,
                                        Xoshiro256& rng) {
  const std::uint32_t half = n / 2;
  std::vector<Edge> edges;
  sample_within(0, half, p_aa, rng, edges);
  sample_within(half, n - half, p_aa, rng, edges);
  sample_between(half, n - half, p_ab, rng, edges);
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Edge> sample(std::uint32_t n, double p_aa, double p_ab, std::uint64_t seed,
                         Sampler sampler) {
  Xoshiro256 rng(seed);
  return sampler == Sampler::pair_loop ? sample_pair_loop(n, p_aa, p_ab, rng)
                                       : sample_block_binomial(n, p_aa, p_ab, rng);
}

}  // namespace

PpmParams resolve_params(std::uint32_t n, double k, double k_ab) {
  if (n % 2 != 0) throw ValidationError("n must be even");
  if (n < 4) throw ValidationError("n must be at least 4");
  if (!std::isfinite(k) || k <= 0.0) throw ValidationError("k must be positive");
  if (!std::isfinite(k_ab) || k_ab < 0.0 || k_ab > 2.0 * k) {
    throw ValidationError("k_ab must lie in [0, 2k]");
  }
  PpmParams p;
  p.n = n;
  p.k = k;
  p.k_ab = k_ab;
  p.k_aa = 2.0 * k - k_ab;
  p.p_aa = p.k_aa / (n - 2.0);
  p.p_ab = p.k_ab / n;
  if (!is_probability(p.p_aa) || !is_probability(p.p_ab)) {
    throw ValidationError("infeasible model: edge probabilities outside [0, 1]");
  }
  p.sigma2 = 0.5 * p.p_aa * (1.0 - p.p_aa) + 0.5 * p.p_ab * (1.0 - p.p_ab);
  return p;
}

PpmParams er_params(std::uint32_t n, double k) {
  if (n < 2) throw ValidationError("n must be at least 2");
  if (!std::isfinite(k) || k < 0.0) throw ValidationError("k must be nonnegative");
  if (k > n) throw ValidationError("k must not exceed n (p = k/n > 1)");
  PpmParams p;
  p.n = n;
  p.k = k;
  p.k_aa = k;
  p.k_ab = k;
  p.p_aa = k / n;
  p.p_ab = p.p_aa;
  p.sigma2 = p.p_aa * (1.0 - p.p_aa);
  return p;
}

GraphSample::GraphSample(PpmParams params, Model model, std::uint64_t seed,
                         std::vector<Edge> edges)
    : params_(params), model_(model), seed_(seed), edges_(std::move(edges)) {}

std::vector<Community> GraphSample::labels() const {
  std::vector<Community> out(n());
  for (std::uint32_t i = 0; i < n(); ++i) out[i] = label(i);
  return out;
}

std::vector<double> GraphSample::dense_adjacency() const {
  const std::size_t dim = n();
  std::vector<double> a(dim * dim, 0.0);
  for (const auto& e : edges_) {
    a[e.u * dim + e.v] = 1.0;
    a[e.v * dim + e.u] = 1.0;
  }
  return a;
}

std::vector<std::uint32_t> GraphSample::degrees() const {
  std::vector<std::uint32_t> deg(n(), 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Csr::Csr(const GraphSample& graph) : n(graph.n()), offsets(graph.n() + 1, 0) {
  const auto deg = graph.degrees();
  for (std::uint32_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + deg[i];
  targets.resize(offsets[n]);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : graph.edges()) {
    targets[fill[e.u]++] = e.v;
    targets[fill[e.v]++] = e.u;
  }
}

void Csr::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::uint32_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t t = offsets[i]; t < offsets[i + 1]; ++t) acc += x[targets[t]];
    y[i] = acc;
  }
}

GraphSample generate_ppm(const PpmParams& params, std::uint64_t seed, Sampler sampler) {
  if (params.n < 4 || params.n % 2 != 0 || !is_probability(params.p_aa) ||
      !is_probability(params.p_ab)) {
    throw ValidationError("invalid PPM parameters");
  }
  return GraphSample(params, Model::ppm, seed,
                     sample(params.n, params.p_aa, params.p_ab, seed, sampler));
}

GraphSample generate_er(std::uint32_t n, double k, std::uint64_t seed, Sampler sampler) {
  const PpmParams params = er_params(n, k);
  return GraphSample(params, Model::er, seed,
                     sample(n, params.p_aa, params.p_ab, seed, sampler));
}

BlockCounts block_counts(const GraphSample& graph) {
  BlockCounts c;
  for (const auto& e : graph.edges()) {
    const auto lu = graph.label(e.u);
    const auto lv = graph.label(e.v);
    if (lu != lv) {
      ++c.ab;
    } else if (lu == Community::a) {
      ++c.aa;
    } else {
      ++c.bb;
    }
  }
  return c;
}

std::size_t count_triangles(const GraphSample& graph) {
  const Csr csr(graph);
  std::vector<std::uint8_t> mark(graph.n(), 0);
  std::size_t triangles = 0;
  for (const auto& e : graph.edges()) {
    for (std::size_t t = csr.offsets[e.u]; t < csr.offsets[e.u + 1]; ++t) {
      mark[csr.targets[t]] = 1;
    }
    for (std::size_t t = csr.offsets[e.v]; t < csr.offsets[e.v + 1]; ++t) {
      const auto w = csr.targets[t];
      if (w > e.v && mark[w]) ++triangles;
    }
    for (std::size_t t = csr.offsets[e.u]; t < csr.offsets[e.u + 1]; ++t) {
      mark[csr.targets[t]] = 0;
    }
  }
  return triangles;
}

GraphSample graph_from_edges(std::uint32_t n,
                             std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    if (i >= n || j >= n) throw ValidationError("edge index out of range");
    if (i == j) throw ValidationError("self-loops are not allowed");
    edges.push_back({std::min(i, j), std::max(i, j)});
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ValidationError("duplicate edge");
  }
  PpmParams params;
  params.n = n;
  params.k = n > 0 ? 2.0 * static_cast<double>(edges.size()) / n : 0.0;
  return GraphSample(params, Model::external, 0, std::move(edges));
}

void write_edge_list(std::ostream& out, const GraphSample& graph) {
  const auto& p = graph.params();
  out << "# n=" << p.n << " seed=" << graph.seed() << " model=" << model_name(graph.model())
      << " k=" << fmt_num(p.k) << " k_aa=" << fmt_num(p.k_aa) << " k_ab=" << fmt_num(p.k_ab)
      << " p_aa=" << fmt_num(p.p_aa) << " p_ab=" << fmt_num(p.p_ab) << '\n';
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const std::string& path, const GraphSample& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_edge_list(out, graph);
  if (!out) throw IoError("failed writing " + path);
}

GraphSample read_edge_list(std::istream& in, std::optional<std::uint32_t> n_hint) {
  std::map<std::string, std::string> header;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::string line;
  bool first_comment = true;
  std::size_t line_no = 0;
  std::uint32_t max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      if (first_comment) {
        std::istringstream tokens(line.substr(start + 1));
        std::string tok;
        while (tokens >> tok) {
          const auto eq = tok.find('=');
          if (eq != std::string::npos) header[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        first_comment = false;
      }
      continue;
    }
    std::istringstream fields(line);
    long long i = -1;
    long long j = -1;
    std::string rest;
    if (!(fields >> i >> j) || (fields >> rest) || i < 0 || j < 0 ||
        i > std::numeric_limits<std::uint32_t>::max() ||
        j > std::numeric_limits<std::uint32_t>::max()) {
      throw IoError("malformed edge on line " + std::to_string(line_no));
    }
    pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    max_index = std::max({max_index, pairs.back().first, pairs.back().second});
  }

  std::optional<std::uint32_t> n;
  if (auto it = header.find("n"); it != header.end()) {
    std::uint32_t value = 0;
    const auto& s = it->second;
    if (std::from_chars(s.data(), s.data() + s.size(), value).ec != std::errc{}) {
      throw IoError("malformed n= in header");
    }
    n = value;
  } else if (n_hint) {
    n = n_hint;
  } else if (!pairs.empty()) {
    n = max_index + 1;
  }
  if (!n || *n == 0) throw ValidationError("no edges / empty graph");

  GraphSample g = graph_from_edges(*n, std::move(pairs));
  auto seed = g.seed();
  if (auto it = header.find("seed"); it != header.end()) {
    const auto& s = it->second;
    if (std::from_chars(s.data(), s.data() + s.size(), seed).ec != std::errc{}) {
      throw IoError("malformed seed= in header");
    }
  }
  // A header written by write_edge_list restores the generating model.
  PpmParams params = g.params();
  Model model = Model::external;
  auto number = [&](const char* key) -> std::optional<double> {
    const auto it = header.find(key);
    if (it == header.end()) return std::nullopt;
    double value = 0.0;
    const auto& s = it->second;
    if (std::from_chars(s.data(), s.data() + s.size(), value).ec != std::errc{}) {
      throw IoError(std::string("malformed ") + key + "= in header");
    }
    return value;
  };
  const auto model_it = header.find("model");
  const auto k = number("k");
  if (model_it != header.end() && k) {
    if (model_it->second == "ppm") {
      if (const auto k_ab = number("k_ab")) {
        params = resolve_params(*n, *k, *k_ab);
        model = Model::ppm;
      }
    } else if (model_it->second == "er") {
      params = er_params(*n, *k);
      model = Model::er;
    }
  }
  return GraphSample(params, model, seed, std::vector<Edge>(g.edges().begin(), g.edges().end()));
}

GraphSample read_edge_list(const std::string& path, std::optional<std::uint32_t> n_hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_edge_list(in, n_hint);
}

}  // namespace ppmenergy
