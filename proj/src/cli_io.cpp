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

#include "ppmenergy/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppmenergy/ensemble.hpp"
#include "ppmenergy/errors.hpp"
#include "ppmenergy/graph_gen.hpp"
#include "ppmenergy/spectral.hpp"
#include "ppmenergy/theory.hpp"
#include "ppmenergy/version.hpp"

namespace ppmenergy::cli {
namespace {

using nlohmann::json;

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

Sampler parse_sampler(const std::string& s) {
  if (s == "pair_loop") return Sampler::pair_loop;
  if (s == "block_binomial") return Sampler::block_binomial;
  throw ValidationError("sampler must be pair_loop or block_binomial");
}

// Opens `path` for writing, or returns `fallback` for "-" / empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open " + path + " for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw IoError("failed writing " + (path.empty() ? "output" : path));
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
  if (!f) throw IoError("failed writing " + path);
}

void print_report(std::ostream& out, const json& report, const std::string& format) {
  if (format == "json") {
    out << report.dump(2) << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [key, value] : report.items()) width = std::max(width, key.size());
  for (const auto& [key, value] : report.items()) {
    out << std::left << std::setw(static_cast<int>(width + 2)) << key;
    if (value.is_number_float()) {
      out << fmt(value.get<double>());
    } else if (value.is_string()) {
      out << value.get<std::string>();
    } else {
      out << value.dump();
    }
    out << '\n';
  }
}

json params_json(const PpmParams& p) {
  return {{"n", p.n},         {"k", p.k},         {"k_aa", p.k_aa},    {"k_ab", p.k_ab},
          {"p_aa", p.p_aa},   {"p_ab", p.p_ab},   {"sigma2", p.sigma2}};
}

// Appends --key value pairs from a JSON config object for every key the
// user did not pass explicitly.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw IoError("malformed config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
      std::ostringstream os;
      os << std::setprecision(17) << v.get<double>();
      return os.str();
    }
    return v.dump();
  };
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back(flag);
      continue;
    }
    merged.push_back(flag);
    if (value.is_array()) {
      for (const auto& item : value) merged.push_back(scalar(item));
    } else {
      merged.push_back(scalar(value));
    }
  }
  return merged;
}

struct GraphOptions {
  std::uint32_t n = 0;
  double k = 0.0;
  double kab = -1.0;
  std::uint64_t seed = 1;
  std::string model = "ppm";
  std::string sampler = "pair_loop";
};

void add_graph_options(CLI::App* cmd, GraphOptions& g, bool required) {
  auto* n = cmd->add_option("--n", g.n, "node count (even for ppm)");
  auto* k = cmd->add_option("--k", g.k, "mean degree");
  if (required) {
    n->required();
    k->required();
  }
  cmd->add_option("--kab", g.kab, "inter-community degree parameter k_ab (ppm)");
  cmd->add_option("--seed", g.seed, "64-bit seed");
  cmd->add_option("--model", g.model, "ppm or er")->check(CLI::IsMember({"ppm", "er"}));
  cmd->add_option("--sampler", g.sampler, "pair_loop or block_binomial")
      ->check(CLI::IsMember({"pair_loop", "block_binomial"}));
}

GraphSample build_graph(const GraphOptions& g) {
  const Sampler sampler = parse_sampler(g.sampler);
  if (g.model == "er") return generate_er(g.n, g.k, g.seed, sampler);
  if (g.kab < 0.0) throw ValidationError("--kab is required for the ppm model");
  return generate_ppm(resolve_params(g.n, g.k, g.kab), g.seed, sampler);
}

json run_manifest(const std::string& command, const json& parameters) {
  return {{"software", "ppmenergy"},
          {"version", kVersion},
          {"command", command},
          {"parameters", parameters}};
}

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph energy and spectra of planted-partition random graphs", "ppmenergy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;

  // generate
  GraphOptions gen;
  std::string gen_output = "-";
  std::string gen_manifest;
  auto* generate = app.add_subcommand("generate", "sample a graph and write its edge list");
  add_graph_options(generate, gen, true);
  generate->add_option("--output,-o", gen_output, "edge-list path, '-' for stdout");
  generate->add_option("--manifest", gen_manifest, "manifest path (default <output>.manifest.json)");
  generate->add_option("--config", config_path, "JSON file supplying flags");

  // spectrum
  GraphOptions spec_graph;
  std::string spec_input;
  std::string spec_output;
  std::string spec_hist;
  std::string spec_format = "text";
  std::string spec_manifest;
  std::size_t bins = kDefaultBins;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, energy and bulk statistics");
  add_graph_options(spectrum, spec_graph, false);
  spectrum->add_option("--input,-i", spec_input, "edge-list file (instead of generating)");
  spectrum->add_option("--output,-o", spec_output, "eigenvalue CSV path");
  spectrum->add_option("--histogram", spec_hist, "histogram CSV path");
  spectrum->add_option("--bins", bins, "histogram bins")->check(CLI::PositiveNumber);
  spectrum->add_option("--manifest", spec_manifest, "manifest path (default <output>.manifest.json)");
  spectrum->add_option("--format", spec_format, "report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  spectrum->add_option("--config", config_path, "JSON file supplying flags");

  // sweep
  SweepSpec sweep_spec;
  std::string sweep_mode = "both";
  std::string sweep_sampler = "pair_loop";
  std::string sweep_output = "-";
  std::string sweep_manifest;
  std::string sweep_plot;
  bool show_progress = false;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over k_ab");
  sweep->add_option("--n", sweep_spec.n, "node count")->required();
  sweep->add_option("--k", sweep_spec.k, "mean degree")->required();
  sweep->add_option("--grid", sweep_spec.k_ab_grid, "k_ab values (default: k, k-1, ..., 0)");
  sweep->add_option("--reps", sweep_spec.reps,
                    "instantiations per grid point (default 2000 for n <= 500, else 1000)");
  sweep->add_option("--seed", sweep_spec.master_seed, "master seed");
  sweep->add_option("--mode", sweep_mode, "energy, lambda2 or both")
      ->check(CLI::IsMember({"energy", "lambda2", "both"}));
  sweep->add_option("--sampler", sweep_sampler, "pair_loop or block_binomial")
      ->check(CLI::IsMember({"pair_loop", "block_binomial"}));
  sweep->add_option("--threads", sweep_spec.threads, "worker threads")->envname(kThreadsEnv);
  sweep->add_option("--output,-o", sweep_output, "summary CSV path, '-' for stdout");
  sweep->add_option("--manifest", sweep_manifest, "manifest path (default <output>.manifest.json)");
  sweep->add_option("--plot-data", sweep_plot, "whitespace-separated plot data path");
  sweep->add_flag("--progress", show_progress, "report progress on stderr");
  sweep->add_option("--config", config_path, "JSON file supplying flags");

  // theory
  double th_k = 0.0;
  int th_q = 2;
  std::optional<std::uint32_t> th_n;
  std::optional<double> th_kab;
  std::string th_format = "json";
  auto* theory_cmd = app.add_subcommand("theory", "closed-form predictions");
  theory_cmd->add_option("--k", th_k, "mean degree")->required();
  theory_cmd->add_option("--q", th_q, "number of communities (threshold only for q != 2)");
  theory_cmd->add_option("--n", th_n, "node count");
  theory_cmd->add_option("--kab", th_kab, "inter-community degree parameter");
  theory_cmd->add_option("--format", th_format, "json or text")
      ->check(CLI::IsMember({"text", "json"}));
  theory_cmd->add_option("--config", config_path, "JSON file supplying flags");

  // A --config flag is resolved before the real parse so that its values
  // behave like flags appended after the user's own.
  std::vector<std::string> args = raw_args;
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    std::string path;
    if (raw_args[i] == "--config" && i + 1 < raw_args.size()) path = raw_args[i + 1];
    if (raw_args[i].rfind("--config=", 0) == 0) path = raw_args[i].substr(9);
    if (!path.empty()) {
      args = merge_config(raw_args, path);
      break;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  if (generate->parsed()) {
    const GraphSample g = build_graph(gen);
    Sink sink(gen_output, out);
    write_edge_list(sink.get(), g);
    sink.finish(gen_output);
    std::string manifest_path = gen_manifest;
    if (manifest_path.empty() && gen_output != "-") manifest_path = gen_output + ".manifest.json";
    if (!manifest_path.empty()) {
      json parameters = params_json(g.params());
      parameters["model"] = gen.model;
      parameters["seed"] = gen.seed;
      parameters["sampler"] = gen.sampler;
      parameters["edge_count"] = g.edge_count();
      write_json_file(manifest_path, run_manifest("generate", parameters));
    }
    return kOk;
  }

  if (spectrum->parsed()) {
    GraphSample g;
    std::optional<std::uint32_t> n_hint;
    if (spectrum->count("--n") > 0) n_hint = spec_graph.n;
    if (!spec_input.empty()) {
      try {
        g = read_edge_list(spec_input, n_hint);
      } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
      }
    } else {
      if (spectrum->count("--n") == 0 || spectrum->count("--k") == 0) {
        throw ValidationError("spectrum needs --input or --n/--k to generate a graph");
      }
      g = build_graph(spec_graph);
    }
    if (g.edge_count() == 0) err << "warning: no edges / empty graph\n";
    const Spectrum s = full_spectrum(g);
    PpmParams params = g.params();
    if (g.model() == Model::external) {
      // Density-matched G(n, p) variance for the bulk edge.
      const double n = g.n();
      const double p = n > 1 ? 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1)) : 0.0;
      params.sigma2 = p * (1.0 - p);
    }
    const BulkStats bulk = bulk_stats(s, params, bins);
    const IdentityReport ids = check_identities(s);
    json report = {
        {"n", s.n},
        {"m", s.m},
        {"seed", g.seed()},
        {"energy", s.energy},
        {"lambda1", s.lambda1},
        {"lambda2_alg", s.lambda2_alg},
        {"lambda2_mag", s.lambda2_mag},
        {"sigma2", params.sigma2},
        {"bulk_edge_pred", bulk.bulk_edge_pred},
        {"outlier_count", bulk.outlier_count},
        {"trace", ids.trace},
        {"second_moment", ids.second_moment},
        {"identities_ok", ids.ok()},
    };
    print_report(out, report, spec_format);
    if (!spec_output.empty()) {
      Sink sink(spec_output, out);
      write_spectrum_csv(sink.get(), s);
      sink.finish(spec_output);
    }
    if (!spec_hist.empty()) {
      Sink sink(spec_hist, out);
      write_histogram_csv(sink.get(), bulk.histogram);
      sink.finish(spec_hist);
    }
    std::string manifest_path = spec_manifest;
    if (manifest_path.empty() && !spec_output.empty() && spec_output != "-") {
      manifest_path = spec_output + ".manifest.json";
    }
    if (!manifest_path.empty()) {
      json parameters = params_json(params);
      if (!spec_input.empty()) {
        parameters["input"] = spec_input;
      } else {
        parameters["model"] = spec_graph.model;
        parameters["seed"] = spec_graph.seed;
        parameters["sampler"] = spec_graph.sampler;
      }
      parameters["bins"] = bins;
      json m = run_manifest("spectrum", parameters);
      m["report"] = report;
      write_json_file(manifest_path, m);
    }
    return kOk;
  }

  if (sweep->parsed()) {
    sweep_spec.mode = parse_sweep_mode(sweep_mode);
    sweep_spec.sampler = parse_sampler(sweep_sampler);
    if (sweep->count("--reps") == 0) sweep_spec.reps = default_reps(sweep_spec.n);
    if (sweep_spec.reps < 1) throw ValidationError("reps must be at least 1");
    validate(sweep_spec);
    ProgressFn progress;
    if (show_progress) {
      progress = [&err](std::size_t done, std::size_t total) {
        if (done % 100 == 0 || done == total) {
          err << "\rprogress " << done << '/' << total << std::flush;
          if (done == total) err << '\n';
        }
      };
    }
    const SweepSummary summary = run_sweep(sweep_spec, progress);
    Sink sink(sweep_output, out);
    write_summary_csv(sink.get(), summary);
    sink.finish(sweep_output);
    std::string manifest_path = sweep_manifest;
    if (manifest_path.empty() && sweep_output != "-") {
      manifest_path = sweep_output + ".manifest.json";
    }
    if (!manifest_path.empty()) write_json_file(manifest_path, manifest_json(summary));
    if (!sweep_plot.empty()) {
      Sink plot(sweep_plot, out);
      auto& os = plot.get();
      os << "# k_aa_minus_k_ab sim_energy theory_energy sim_lambda2 theory_lambda2 "
            "sim_delta_e sim_delta_e_stderr theory_delta_e_anchored theory_delta_e_raw\n";
      for (const auto& p : summary.points) {
        os << fmt(p.separation) << ' ' << fmt(p.mean_energy) << ' '
           << fmt(p.theory.ppm_energy_pred) << ' ' << fmt(p.mean_lambda2) << ' '
           << fmt(p.theory.lambda2_pred) << ' ' << fmt(p.mean_delta_e) << ' '
           << fmt(p.stderr_delta_e) << ' ' << fmt(p.theory.delta_e_anchored) << ' '
           << fmt(p.theory.delta_e_raw) << '\n';
      }
      plot.finish(sweep_plot);
    }
    return kOk;
  }

  if (theory_cmd->parsed()) {
    json report;
    report["k"] = th_k;
    report["q"] = th_q;
    report["threshold"] = theory::detectability_threshold(th_k, th_q);
    if (th_n || th_kab) {
      if (!th_n || !th_kab) throw ValidationError("--n and --kab must be given together");
      const PpmParams p = resolve_params(*th_n, th_k, *th_kab);
      const auto t = theory::predict(p, th_q);
      report["params"] = params_json(p);
      report["detectable"] = t.detectable;
      report["lambda1_pred"] = t.lambda1_pred;
      report["lambda2_pred"] = t.lambda2_pred;
      report["bulk_energy_pred"] = t.bulk_energy_pred;
      report["er_energy_pred"] = t.er_energy_pred;
      report["ppm_energy_pred"] = t.ppm_energy_pred;
      report["delta_e_raw"] = t.delta_e_raw;
      report["delta_e_anchored"] = t.delta_e_anchored;
      report["offset_at_threshold"] = t.offset_at_threshold;
    }
    print_report(out, report, th_format);
    return kOk;
  }
  return kValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace ppmenergy::cli
