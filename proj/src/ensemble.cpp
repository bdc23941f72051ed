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

#include "ppmenergy/ensemble.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ppmenergy/errors.hpp"
#include "ppmenergy/rng.hpp"
#include "ppmenergy/running_stats.hpp"
#include "ppmenergy/spectral.hpp"
#include "ppmenergy/version.hpp"

namespace ppmenergy {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool needs_energy(SweepMode mode) { return mode != SweepMode::lambda2; }
bool reports_lambda2(SweepMode mode) { return mode != SweepMode::energy; }

InstanceResult measure(const GraphSample& graph, SweepMode mode) {
  InstanceResult r;
  if (needs_energy(mode)) {
    const Spectrum s = full_spectrum(graph);
    r.energy = s.energy;
    r.lambda2 = reports_lambda2(mode) ? s.lambda2_alg : kNaN;
  } else {
    r.energy = kNaN;
    r.lambda2 = leading_eigenvalues(graph, 2)[1];
  }
  r.ok = true;
  return r;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

const char* sampler_name(Sampler s) {
  return s == Sampler::pair_loop ? "pair_loop" : "block_binomial";
}

}  // namespace

const char* to_string(SweepMode mode) noexcept {
  switch (mode) {
    case SweepMode::energy: return "energy";
    case SweepMode::lambda2: return "lambda2";
    case SweepMode::both: return "both";
  }
  return "both";
}

SweepMode parse_sweep_mode(const std::string& text) {
  if (text == "energy") return SweepMode::energy;
  if (text == "lambda2") return SweepMode::lambda2;
  if (text == "both") return SweepMode::both;
  throw ValidationError("mode must be one of energy, lambda2, both");
}

std::vector<double> default_grid(double k) {
  std::vector<double> grid;
  for (auto v = static_cast<long long>(std::floor(k)); v >= 0; --v) {
    grid.push_back(static_cast<double>(v));
  }
  return grid;
}

std::size_t default_reps(std::uint32_t n) noexcept { return n <= 500 ? 2000 : 1000; }

void validate(const SweepSpec& spec) {
  if (spec.reps < 1) throw ValidationError("reps must be at least 1");
  if (spec.threads < 1) throw ValidationError("threads must be at least 1");
  const auto grid = spec.k_ab_grid.empty() ? default_grid(spec.k) : spec.k_ab_grid;
  for (double k_ab : grid) (void)resolve_params(spec.n, spec.k, k_ab);
  if (needs_energy(spec.mode)) (void)baseline_params(spec.n, spec.k);
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t rep) noexcept {
  return derive_seed(master, "replicate", 0, rep);
}

PpmParams baseline_params(std::uint32_t n, double k) { return resolve_params(n, k, k); }

SweepSummary run_sweep(const SweepSpec& input, const ProgressFn& progress) {
  validate(input);
  const auto start = std::chrono::steady_clock::now();
  SweepSummary summary;
  summary.spec = input;
  SweepSpec& spec = summary.spec;
  if (spec.k_ab_grid.empty()) spec.k_ab_grid = default_grid(spec.k);
  set_eigensolver_threads(spec.eigensolver_threads);

  const std::size_t grid_size = spec.k_ab_grid.size();
  const std::size_t reps = spec.reps;
  const bool with_er = needs_energy(spec.mode);
  const PpmParams base = with_er ? baseline_params(spec.n, spec.k) : PpmParams{};
  std::vector<PpmParams> params;
  for (double k_ab : spec.k_ab_grid) params.push_back(resolve_params(spec.n, spec.k, k_ab));

  summary.instances.assign(grid_size, std::vector<InstanceResult>(reps));
  if (with_er) summary.er_instances.assign(reps, InstanceResult{});

  // Task t < er_tasks is baseline rep t; the rest are (grid, rep) in row-major order.
  const std::size_t er_tasks = with_er ? reps : 0;
  const std::size_t total = er_tasks + grid_size * reps;
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex fatal_mutex;
  std::exception_ptr fatal;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= total) return;
      try {
        if (t < er_tasks) {
          const auto g = generate_ppm(base, replicate_seed(spec.master_seed, t), spec.sampler);
          summary.er_instances[t] = measure(g, SweepMode::energy);
        } else {
          const std::size_t gi = (t - er_tasks) / reps;
          const std::size_t rep = (t - er_tasks) % reps;
          const auto g =
              generate_ppm(params[gi], replicate_seed(spec.master_seed, rep), spec.sampler);
          summary.instances[gi][rep] = measure(g, spec.mode);
        }
      } catch (const NumericalError& e) {
        errors[t] = e.what();
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(total);
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(fatal_mutex);
        progress(finished, total);
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < spec.threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (fatal) std::rethrow_exception(fatal);

  for (std::size_t t = 0; t < total; ++t) {
    if (errors[t].empty()) continue;
    Failure f;
    f.message = errors[t];
    if (t < er_tasks) {
      f.stream = "baseline";
      f.rep = t;
      f.seed = replicate_seed(spec.master_seed, t);
    } else {
      f.stream = "ppm";
      f.grid_index = (t - er_tasks) / reps;
      f.rep = (t - er_tasks) % reps;
      f.seed = replicate_seed(spec.master_seed, f.rep);
    }
    summary.failures.push_back(std::move(f));
  }
  if (static_cast<double>(summary.failures.size()) >
      spec.max_failure_rate * static_cast<double>(total)) {
    throw NumericalError("eigensolver failure rate " + std::to_string(summary.failures.size()) +
                         "/" + std::to_string(total) + " exceeds the abort limit");
  }

  RunningStats er_stats;
  for (const auto& r : summary.er_instances) {
    if (r.ok) er_stats.push(r.energy);
  }
  summary.er_count = er_stats.count();
  summary.mean_er_energy = with_er ? er_stats.mean() : kNaN;
  summary.stderr_er_energy = with_er ? er_stats.stderr_mean() : kNaN;

  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    RunningStats energy;
    RunningStats lambda2;
    RunningStats delta;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const auto& r = summary.instances[gi][rep];
      if (!r.ok) continue;
      energy.push(r.energy);
      lambda2.push(r.lambda2);
      if (with_er && summary.er_instances[rep].ok) {
        delta.push(r.energy - summary.er_instances[rep].energy);
      }
    }
    GridPointSummary p;
    p.k_ab = params[gi].k_ab;
    p.separation = params[gi].separation();
    p.count = energy.count();
    p.theory = theory::predict(params[gi]);
    if (with_er) {
      p.mean_energy = energy.mean();
      p.stderr_energy = energy.stderr_mean();
      p.mean_delta_e = delta.mean();
      p.stderr_delta_e = delta.stderr_mean();
    } else {
      p.mean_energy = p.stderr_energy = p.mean_delta_e = p.stderr_delta_e = kNaN;
    }
    if (reports_lambda2(spec.mode)) {
      p.mean_lambda2 = lambda2.mean();
      p.stderr_lambda2 = lambda2.stderr_mean();
    } else {
      p.mean_lambda2 = p.stderr_lambda2 = kNaN;
    }
    summary.points.push_back(p);
  }
  if (reports_lambda2(spec.mode)) {
    summary.effective_threshold = estimate_effective_threshold(summary.points, spec.k);
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

std::vector<std::optional<double>> paired_er_baseline(const SweepSpec& spec) {
  if (spec.reps < 1) throw ValidationError("reps must be at least 1");
  const PpmParams base = baseline_params(spec.n, spec.k);
  set_eigensolver_threads(spec.eigensolver_threads);
  std::vector<std::optional<double>> out(spec.reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t rep; (rep = next.fetch_add(1)) < spec.reps;) {
      try {
        const auto g = generate_ppm(base, replicate_seed(spec.master_seed, rep), spec.sampler);
        out[rep] = full_spectrum(g).energy;
      } catch (const NumericalError&) {
        out[rep].reset();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < spec.threads; ++i) pool.emplace_back(worker);
    worker();
  }
  return out;
}

void write_summary_csv(std::ostream& out, const SweepSummary& summary) {
  out << "k_aa_minus_k_ab,k_ab,mean_energy,stderr_energy,mean_lambda2,stderr_lambda2,"
         "mean_delta_e,stderr_delta_e,count,theory_lambda2,theory_delta_e_raw,"
         "theory_delta_e_anchored,theory_energy\n";
  for (const auto& p : summary.points) {
    out << fmt(p.separation) << ',' << fmt(p.k_ab) << ',' << fmt(p.mean_energy) << ','
        << fmt(p.stderr_energy) << ',' << fmt(p.mean_lambda2) << ',' << fmt(p.stderr_lambda2)
        << ',' << fmt(p.mean_delta_e) << ',' << fmt(p.stderr_delta_e) << ',' << p.count << ','
        << fmt(p.theory.lambda2_pred) << ',' << fmt(p.theory.delta_e_raw) << ','
        << fmt(p.theory.delta_e_anchored) << ',' << fmt(p.theory.ppm_energy_pred) << '\n';
  }
}

nlohmann::json spec_to_json(const SweepSpec& spec) {
  return {
      {"n", spec.n},
      {"k", spec.k},
      {"k_ab_grid", spec.k_ab_grid.empty() ? default_grid(spec.k) : spec.k_ab_grid},
      {"reps", spec.reps},
      {"master_seed", spec.master_seed},
      {"mode", to_string(spec.mode)},
      {"sampler", sampler_name(spec.sampler)},
      {"threads", spec.threads},
      {"eigensolver_threads", spec.eigensolver_threads},
      {"max_failure_rate", spec.max_failure_rate},
  };
}

SweepSpec spec_from_json(const nlohmann::json& j) {
  SweepSpec spec;
  try {
    spec.n = j.at("n").get<std::uint32_t>();
    spec.k = j.at("k").get<double>();
    spec.k_ab_grid = j.value("k_ab_grid", std::vector<double>{});
    spec.reps = j.at("reps").get<std::size_t>();
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    spec.mode = parse_sweep_mode(j.value("mode", std::string("both")));
    const auto sampler = j.value("sampler", std::string("pair_loop"));
    if (sampler == "pair_loop") {
      spec.sampler = Sampler::pair_loop;
    } else if (sampler == "block_binomial") {
      spec.sampler = Sampler::block_binomial;
    } else {
      throw ValidationError("unknown sampler " + sampler);
    }
    spec.threads = j.value("threads", 1u);
    spec.eigensolver_threads = j.value("eigensolver_threads", 1);
    spec.max_failure_rate = j.value("max_failure_rate", 1e-3);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad sweep spec: ") + e.what());
  }
  return spec;
}

nlohmann::json manifest_json(const SweepSummary& summary) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : summary.failures) {
    failures.push_back({{"stream", f.stream},
                        {"grid_index", f.grid_index},
                        {"rep", f.rep},
                        {"seed", f.seed},
                        {"message", f.message}});
  }
  nlohmann::json j = {
      {"software", "ppmenergy"},
      {"version", kVersion},
      {"spec", spec_to_json(summary.spec)},
      {"wall_seconds", summary.wall_seconds},
      {"failures", failures},
      {"er_baseline",
       {{"count", summary.er_count},
        {"mean_energy", summary.er_count ? nlohmann::json(summary.mean_er_energy) : nullptr},
        {"stderr_energy", summary.er_count ? nlohmann::json(summary.stderr_er_energy) : nullptr}}},
  };
  j["effective_threshold"] =
      summary.effective_threshold ? nlohmann::json(*summary.effective_threshold) : nullptr;
  return j;
}

}  // namespace ppmenergy
