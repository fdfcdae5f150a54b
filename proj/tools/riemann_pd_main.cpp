// riemann-pd: reproducible experiment driver for the manifold primal-dual
// toolkit.  Subcommands: pca | sync | maxcut | bounds.  Every run derives
// per-trial generators as split(master_seed, trial_index), executes trials
// on a worker pool, and writes CSV results plus a JSON manifest; all files
// are written by the coordinator only, atomically, and removed again if any
// part of the run fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rpd/bounds.hpp"
#include "rpd/errors.hpp"
#include "rpd/io.hpp"
#include "rpd/manifolds.hpp"
#include "rpd/maxcut.hpp"
#include "rpd/parallel.hpp"
#include "rpd/pca.hpp"
#include "rpd/rng.hpp"
#include "rpd/solver.hpp"
#include "rpd/sync.hpp"

#ifndef RPD_BUILD_ID
#define RPD_BUILD_ID "unknown"
#endif

namespace {

using json = nlohmann::json;
using rpd::format_double;

struct CommonOpts {
  std::uint64_t seed = 42;
  int trials = 10;
  std::string out = "out";
  bool paper_scale = false;
};

void add_common_flags(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--seed", c.seed, "Master seed (per-trial seeds are derived)")
      ->capture_default_str();
  sub->add_option("--trials", c.trials, "Number of independent trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_flag("--paper-scale", c.paper_scale,
                "Use the full experiment sizes instead of the desk profile");
}

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  if (n == 1) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

/// Collects (path, content) pairs during a run and flushes them at the end;
/// if any write fails, everything already flushed is removed again.
class OutputSet {
 public:
  void add(const std::string& path, std::string content) {
    files_.emplace_back(path, std::move(content));
  }

  /// Writes all files (manifest last, callers add it last); on failure
  /// removes whatever was already written and rethrows.
  std::vector<std::string> flush() {
    std::vector<std::string> written;
    try {
      for (const auto& [path, content] : files_) {
        rpd::write_file_atomic(path, content);
        written.push_back(path);
      }
    } catch (...) {
      for (const auto& path : written) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
      }
      throw;
    }
    return written;
  }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    out.reserve(files_.size());
    for (const auto& [path, content] : files_) out.push_back(path);
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

json base_manifest(const std::string& command, const CommonOpts& c,
                   const std::vector<double>& trial_wall_ms,
                   const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["build"] = RPD_BUILD_ID;
  m["master_seed"] = c.seed;
  m["trials"] = c.trials;
  m["trial_seed_rule"] = "split(master_seed, trial_index)";
  m["trial_wall_ms"] = trial_wall_ms;
  m["outputs"] = outputs;
  return m;
}

std::filesystem::path out_path(const CommonOpts& c, const std::string& name) {
  return std::filesystem::path(c.out) / name;
}

// ---------------------------------------------------------------------------
// pca
// ---------------------------------------------------------------------------

struct PcaOpts {
  CommonOpts common;
  double snr = 1.0;
  double delta = 0.9;
  int dim = 400;
  int samples = 400;
  double alpha = 0.1;
  std::string method = "both";
};

int cmd_pca(const PcaOpts& opt) {
  struct Row {
    std::string method;
    double overlap = 0.0;
    double cv = 0.0;
    double ms = 0.0;
  };
  const int trials = opt.common.trials;
  std::vector<std::vector<Row>> rows(static_cast<std::size_t>(trials));
  std::vector<double> wall_ms(static_cast<std::size_t>(trials), 0.0);
  const bool run_pd = opt.method == "pd" || opt.method == "both";
  const bool run_spectral = opt.method == "spectral" || opt.method == "both";

  rpd::parallel_for(trials, [&](long long k) {
    const auto t0 = std::chrono::steady_clock::now();
    rpd::Rng rng = rpd::Rng::split(opt.common.seed, static_cast<std::uint64_t>(k));
    const auto model = rpd::pca::make_spiked_model(opt.dim, opt.samples,
                                                   opt.snr, opt.delta, rng);
    const Eigen::MatrixXd Y = rpd::pca::generate_spiked(model, rng);
    auto& out = rows[static_cast<std::size_t>(k)];
    if (run_pd) {
      const auto m0 = std::chrono::steady_clock::now();
      const auto result = rpd::pca::pca_pd_run(
          model, Y, rng, opt.alpha, rpd::StepSchedule::inverse_sqrt());
      out.push_back({"pd", result.estimate.overlap, result.estimate.cv,
                     elapsed_ms(m0)});
    }
    if (run_spectral) {
      const auto m0 = std::chrono::steady_clock::now();
      const Eigen::VectorXd xhat = rpd::pca::spectral_baseline(Y);
      const auto [overlap, cv] = rpd::pca::metrics(xhat, model.spike);
      out.push_back({"spectral", overlap, cv, elapsed_ms(m0)});
    }
    wall_ms[static_cast<std::size_t>(k)] = elapsed_ms(t0);
  });

  rpd::CsvBuilder trials_csv(
      {"trial", "snr", "delta", "T", "d", "method", "overlap", "cv",
       "runtime_ms"});
  for (int k = 0; k < trials; ++k) {
    for (const auto& row : rows[static_cast<std::size_t>(k)]) {
      trials_csv.add_row({std::to_string(k), format_double(opt.snr),
                          format_double(opt.delta),
                          std::to_string(opt.samples), std::to_string(opt.dim),
                          row.method, format_double(row.overlap),
                          format_double(row.cv), format_double(row.ms)});
    }
  }

  rpd::CsvBuilder agg_csv({"method", "trials", "mean_overlap", "se_overlap",
                           "mean_cv", "se_cv"});
  for (const std::string& method : {std::string("pd"), std::string("spectral")}) {
    std::vector<double> overlaps;
    std::vector<double> cvs;
    for (const auto& per_trial : rows) {
      for (const auto& row : per_trial) {
        if (row.method == method) {
          overlaps.push_back(row.overlap);
          cvs.push_back(row.cv);
        }
      }
    }
    if (overlaps.empty()) continue;
    agg_csv.add_row({method, std::to_string(overlaps.size()),
                     format_double(mean_of(overlaps)),
                     format_double(standard_error(overlaps)),
                     format_double(mean_of(cvs)),
                     format_double(standard_error(cvs))});
  }

  OutputSet outputs;
  outputs.add(out_path(opt.common, "pca_trials.csv").string(),
              trials_csv.str());
  outputs.add(out_path(opt.common, "pca_aggregate.csv").string(),
              agg_csv.str());
  json manifest = base_manifest("pca", opt.common, wall_ms, outputs.paths());
  manifest["config"] = {{"snr", opt.snr},        {"delta", opt.delta},
                        {"dim", opt.dim},        {"samples", opt.samples},
                        {"alpha", opt.alpha},    {"method", opt.method},
                        {"paper_scale", opt.common.paper_scale}};
  json manifest_outputs = manifest["outputs"];
  manifest_outputs.push_back(out_path(opt.common, "manifest.json").string());
  manifest["outputs"] = manifest_outputs;
  outputs.add(out_path(opt.common, "manifest.json").string(),
              manifest.dump(2) + "\n");
  outputs.flush();
  return 0;
}

// ---------------------------------------------------------------------------
// sync
// ---------------------------------------------------------------------------

struct SyncOpts {
  CommonOpts common;
  int n = 50;
  double p = 0.1;
  double beta = 10.0;
  int anchors = 1;
  double eta = 0.05;
  double alpha = 1e-3;
  long long iters = 1000;
};

int cmd_sync(const SyncOpts& opt) {
  struct TrialOut {
    std::string csv;
    double final_max_frob = 0.0;
    double final_residual = 0.0;
    double residual_ratio = 0.0;
  };
  const int trials = opt.common.trials;
  std::vector<TrialOut> out(static_cast<std::size_t>(trials));
  std::vector<double> wall_ms(static_cast<std::size_t>(trials), 0.0);

  rpd::parallel_for(trials, [&](long long k) {
    const auto t0 = std::chrono::steady_clock::now();
    rpd::Rng rng = rpd::Rng::split(opt.common.seed, static_cast<std::uint64_t>(k));
    const auto instance = rpd::sync::make_sync_instance(
        opt.n, opt.p, opt.beta, opt.anchors, rng);
    const auto result =
        rpd::sync::sync_run(instance, opt.iters, opt.eta, opt.alpha, rng);

    rpd::CsvBuilder csv({"t", "vertex", "frobenius_error", "residual"});
    for (std::size_t t = 0; t < result.frob_errors.size(); ++t) {
      const std::string resid = format_double(result.residuals[t]);
      for (int i = 0; i < opt.n; ++i) {
        csv.add_row({std::to_string(t + 1), std::to_string(i),
                     format_double(result.frob_errors[t][static_cast<std::size_t>(i)]),
                     resid});
      }
    }
    TrialOut& o = out[static_cast<std::size_t>(k)];
    o.csv = csv.str();
    const auto& last = result.frob_errors.back();
    o.final_max_frob = *std::max_element(last.begin(), last.end());
    o.final_residual = result.residuals.back();
    o.residual_ratio = result.residuals.front() > 0.0
                           ? o.final_residual / result.residuals.front()
                           : std::numeric_limits<double>::quiet_NaN();
    wall_ms[static_cast<std::size_t>(k)] = elapsed_ms(t0);
  });

  std::vector<double> frobs;
  std::vector<double> finals;
  std::vector<double> ratios;
  for (const auto& o : out) {
    frobs.push_back(o.final_max_frob);
    finals.push_back(o.final_residual);
    ratios.push_back(o.residual_ratio);
  }
  rpd::CsvBuilder agg_csv({"trials", "mean_final_max_frob",
                           "se_final_max_frob", "mean_final_residual",
                           "se_final_residual", "mean_residual_ratio",
                           "se_residual_ratio"});
  agg_csv.add_row({std::to_string(trials), format_double(mean_of(frobs)),
                   format_double(standard_error(frobs)),
                   format_double(mean_of(finals)),
                   format_double(standard_error(finals)),
                   format_double(mean_of(ratios)),
                   format_double(standard_error(ratios))});

  OutputSet outputs;
  for (int k = 0; k < trials; ++k) {
    outputs.add(
        out_path(opt.common, "sync_trial_" + std::to_string(k) + ".csv")
            .string(),
        std::move(out[static_cast<std::size_t>(k)].csv));
  }
  outputs.add(out_path(opt.common, "sync_aggregate.csv").string(),
              agg_csv.str());
  json manifest = base_manifest("sync", opt.common, wall_ms, outputs.paths());
  manifest["config"] = {{"n", opt.n},           {"p", opt.p},
                        {"beta", opt.beta},     {"anchors", opt.anchors},
                        {"eta", opt.eta},       {"alpha", opt.alpha},
                        {"iters", opt.iters},
                        {"paper_scale", opt.common.paper_scale}};
  json manifest_outputs = manifest["outputs"];
  manifest_outputs.push_back(out_path(opt.common, "manifest.json").string());
  manifest["outputs"] = manifest_outputs;
  outputs.add(out_path(opt.common, "manifest.json").string(),
              manifest.dump(2) + "\n");
  outputs.flush();
  return 0;
}

// ---------------------------------------------------------------------------
// maxcut
// ---------------------------------------------------------------------------

struct MaxcutOpts {
  CommonOpts common;
  int n = 60;
  double p = 0.1;
  std::string method = "hyperplane";
  int d = 3;
  int forced_edges = 0;
  int rounds = 1000;
  double tol1 = 1e-3;
  double tol2 = 1e-3;
  long long max_iter = 5000;
  std::string graph_file;
};

int cmd_maxcut(const MaxcutOpts& opt) {
  namespace mc = rpd::maxcut;
  struct Row {
    int n = 0;
    bool from_file = false;
    long long iterations = 0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double best_cut = 0.0;
    double bf_optimum = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN();
  };
  const int trials = opt.common.trials;
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  std::vector<double> wall_ms(static_cast<std::size_t>(trials), 0.0);

  std::optional<mc::WeightedGraph> file_graph;
  if (!opt.graph_file.empty()) {
    file_graph = mc::parse_graph_file(opt.graph_file);
  }
  const std::string method_csv = opt.method == "hyperplane" ? "hyperplane"
                                 : opt.method == "dist-sphere"
                                     ? "dist_sphere"
                                     : "dist_so3";

  rpd::parallel_for(trials, [&](long long k) {
    const auto t0 = std::chrono::steady_clock::now();
    rpd::Rng rng = rpd::Rng::split(opt.common.seed, static_cast<std::uint64_t>(k));
    mc::WeightedGraph graph;
    if (file_graph.has_value()) {
      graph = *file_graph;
    } else {
      graph = mc::er_weighted_graph(opt.n, opt.p, rng);
      if (opt.forced_edges > 0) {
        mc::choose_forced_edges(graph, opt.forced_edges, rng);
      }
    }
    // Dual regularizer: 0 for unconstrained runs, 0.01 once forced edges
    // put the dual variables in play.
    const double alpha = graph.forced.empty() ? 0.0 : 0.01;
    const auto schedule = mc::default_schedule();

    mc::SolveReport report;
    mc::Cut best;
    if (opt.method == "hyperplane") {
      const auto emb =
          mc::hyperplane_pd_solve(graph, opt.d, alpha, schedule, opt.tol1,
                                  opt.tol2, opt.max_iter, rng, &report);
      best = mc::hyperplane_round(emb, graph, opt.rounds, rng);
    } else if (opt.method == "dist-sphere") {
      const auto emb =
          mc::distance_pd_solve_sphere(graph, opt.d, alpha, schedule, opt.tol1,
                                       opt.tol2, opt.max_iter, rng, &report);
      best = mc::distance_round(emb, graph, opt.rounds, rng);
    } else {
      const auto emb =
          mc::distance_pd_solve_so3(graph, alpha, schedule, opt.tol1, opt.tol2,
                                    opt.max_iter, rng, &report);
      best = mc::distance_round(emb, graph, opt.rounds, rng);
    }

    Row& row = rows[static_cast<std::size_t>(k)];
    row.n = graph.n;
    row.from_file = file_graph.has_value();
    row.iterations = report.iterations;
    row.delta1 = report.delta1;
    row.delta2 = report.delta2;
    row.best_cut = best.value;
    if (graph.n <= 20) {
      row.bf_optimum = mc::brute_force_optimum(graph).value;
      row.ratio = row.bf_optimum > 0.0
                      ? row.best_cut / row.bf_optimum
                      : std::numeric_limits<double>::quiet_NaN();
    }
    wall_ms[static_cast<std::size_t>(k)] = elapsed_ms(t0);
  });

  rpd::CsvBuilder csv({"instance_id", "n", "p", "method", "iterations",
                       "delta1", "delta2", "best_cut", "bf_optimum", "ratio"});
  for (int k = 0; k < trials; ++k) {
    const Row& row = rows[static_cast<std::size_t>(k)];
    csv.add_row({std::to_string(k), std::to_string(row.n),
                 row.from_file
                     ? "nan"
                     : format_double(opt.p),
                 method_csv, std::to_string(row.iterations),
                 format_double(row.delta1), format_double(row.delta2),
                 format_double(row.best_cut), format_double(row.bf_optimum),
                 format_double(row.ratio)});
  }

  std::vector<double> cuts;
  std::vector<double> ratios;
  for (const auto& row : rows) {
    cuts.push_back(row.best_cut);
    if (std::isfinite(row.ratio)) ratios.push_back(row.ratio);
  }
  rpd::CsvBuilder agg_csv({"trials", "mean_best_cut", "se_best_cut",
                           "mean_ratio", "se_ratio"});
  agg_csv.add_row({std::to_string(trials), format_double(mean_of(cuts)),
                   format_double(standard_error(cuts)),
                   format_double(mean_of(ratios)),
                   format_double(standard_error(ratios))});

  OutputSet outputs;
  outputs.add(out_path(opt.common, "maxcut_results.csv").string(), csv.str());
  outputs.add(out_path(opt.common, "maxcut_aggregate.csv").string(),
              agg_csv.str());
  json manifest =
      base_manifest("maxcut", opt.common, wall_ms, outputs.paths());
  manifest["config"] = {{"n", opt.n},
                        {"p", opt.p},
                        {"method", opt.method},
                        {"d", opt.d},
                        {"forced_edges", opt.forced_edges},
                        {"rounds", opt.rounds},
                        {"tol1", opt.tol1},
                        {"tol2", opt.tol2},
                        {"max_iter", opt.max_iter},
                        {"graph_file", opt.graph_file},
                        {"paper_scale", opt.common.paper_scale}};
  json manifest_outputs = manifest["outputs"];
  manifest_outputs.push_back(out_path(opt.common, "manifest.json").string());
  manifest["outputs"] = manifest_outputs;
  outputs.add(out_path(opt.common, "manifest.json").string(),
              manifest.dump(2) + "\n");
  outputs.flush();
  return 0;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

struct BoundsOpts {
  CommonOpts common;
  bool out_given = false;
  std::string regime;
  std::string inputs_path;
};

rpd::StepSchedule schedule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw rpd::ParseError("schedule: expected {\"type\": ...}");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "inverse_sqrt") return rpd::StepSchedule::inverse_sqrt();
  if (type == "constant") {
    if (!j.contains("eta")) throw rpd::ParseError("constant schedule needs 'eta'");
    return rpd::StepSchedule::constant(j.at("eta").get<double>());
  }
  if (type == "piecewise") {
    if (!j.contains("segments") || !j.contains("tail")) {
      throw rpd::ParseError("piecewise schedule needs 'segments' and 'tail'");
    }
    std::vector<std::pair<long long, double>> segments;
    for (const auto& seg : j.at("segments")) {
      if (!seg.is_array() || seg.size() != 2) {
        throw rpd::ParseError("piecewise segment must be [boundary, eta]");
      }
      segments.emplace_back(seg[0].get<long long>(), seg[1].get<double>());
    }
    return rpd::StepSchedule::piecewise(segments, j.at("tail").get<double>());
  }
  throw rpd::ParseError("unknown schedule type: " + type);
}

std::vector<double> moments_from_json(const json& j, const char* name) {
  std::vector<double> out;
  if (j.is_null()) return out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
    return out;
  }
  if (j.is_array()) {
    for (const auto& x : j) out.push_back(x.get<double>());
    return out;
  }
  throw rpd::ParseError(std::string(name) + ": expected number or array");
}

int cmd_bounds(const BoundsOpts& opt) {
  json j;
  {
    std::ifstream in(opt.inputs_path);
    if (!in) throw rpd::ParseError("cannot open inputs file: " + opt.inputs_path);
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw rpd::ParseError(std::string("inputs file is not valid JSON: ") +
                            e.what());
    }
  }
  rpd::BoundInputs inputs;
  auto get_or = [&](const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
  };
  inputs.kappa = get_or("kappa", 0.0);
  inputs.R = get_or("R", 0.0);
  inputs.d0 = get_or("d0", 0.0);
  inputs.m = j.contains("m") ? j.at("m").get<int>() : 0;
  inputs.G = get_or("G", 0.0);
  inputs.M_f = get_or("M_f", 0.0);
  inputs.M_h = get_or("M_h", 0.0);
  inputs.alpha = get_or("alpha", 0.0);
  inputs.T = j.contains("T") ? j.at("T").get<long long>() : 1;
  if (j.contains("schedule")) inputs.eta = schedule_from_json(j.at("schedule"));
  if (j.contains("e2")) inputs.e2 = moments_from_json(j.at("e2"), "e2");
  if (j.contains("e3")) inputs.e3 = moments_from_json(j.at("e3"), "e3");

  struct Evaluated {
    std::string name;
    bool ok = false;
    double value = 0.0;
    std::string why;
  };
  auto evaluate = [&](const std::string& name,
                      double (*fn)(const rpd::BoundInputs&)) {
    Evaluated ev;
    ev.name = name;
    try {
      ev.value = fn(inputs);
      ev.ok = true;
    } catch (const rpd::DomainError& e) {
      ev.why = e.what();
    }
    return ev;
  };
  const std::vector<Evaluated> results = {
      evaluate("thm1", rpd::bound_thm1),
      evaluate("thm2", rpd::bound_thm2),
      evaluate("thm5", rpd::bound_thm5),
  };
  const std::string required = opt.regime == "hyperbolic"  ? "thm1"
                               : opt.regime == "elliptic"  ? "thm2"
                                                           : "thm5";
  std::string csv_text;
  {
    rpd::CsvBuilder csv({"bound", "value"});
    for (const auto& ev : results) {
      const std::string printed = ev.ok ? format_double(ev.value) : "n/a";
      std::cout << ev.name << "," << printed << "\n";
      csv.add_row({ev.name, printed});
    }
    csv_text = csv.str();
  }
  for (const auto& ev : results) {
    if (ev.name == required && !ev.ok) {
      throw rpd::DomainError("regime '" + opt.regime +
                             "' is not applicable to these inputs: " + ev.why);
    }
  }
  if (opt.out_given) {
    OutputSet outputs;
    outputs.add(out_path(opt.common, "bounds.csv").string(), csv_text);
    json manifest = base_manifest("bounds", opt.common, {}, outputs.paths());
    manifest["config"] = {{"regime", opt.regime},
                          {"inputs", opt.inputs_path}};
    json manifest_outputs = manifest["outputs"];
    manifest_outputs.push_back(out_path(opt.common, "manifest.json").string());
    manifest["outputs"] = manifest_outputs;
    outputs.add(out_path(opt.common, "manifest.json").string(),
                manifest.dump(2) + "\n");
    outputs.flush();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riemann-pd: primal-dual optimization on manifolds — "
               "experiment driver"};
  app.require_subcommand(1);

  PcaOpts pca;
  CLI::App* pca_cmd = app.add_subcommand(
      "pca", "Non-negative streaming PCA on the spiked covariance model");
  add_common_flags(pca_cmd, pca.common);
  pca_cmd->add_option("--snr", pca.snr, "Spike signal-to-noise ratio")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pca_cmd->add_option("--delta", pca.delta, "Spike density in (0, 1]")
      ->capture_default_str();
  auto* pca_dim = pca_cmd->add_option("--dim", pca.dim, "Ambient dimension d")
                      ->check(CLI::PositiveNumber)
                      ->capture_default_str();
  auto* pca_samples =
      pca_cmd->add_option("--samples", pca.samples, "Stream length T (<= d)")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
  pca_cmd->add_option("--alpha", pca.alpha, "Dual regularizer")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pca_cmd->add_option("--method", pca.method, "Estimator(s) to run")
      ->check(CLI::IsMember({"pd", "spectral", "both"}))
      ->capture_default_str();

  SyncOpts sync;
  CLI::App* sync_cmd = app.add_subcommand(
      "sync", "Anchored rotation synchronization on SO(3)^n");
  add_common_flags(sync_cmd, sync.common);
  auto* sync_n = sync_cmd->add_option("--n", sync.n, "Number of vertices")
                     ->check(CLI::PositiveNumber)
                     ->capture_default_str();
  auto* sync_p = sync_cmd->add_option("--p", sync.p, "Edge probability")
                     ->capture_default_str();
  sync_cmd
      ->add_option("--beta", sync.beta,
                   "Langevin concentration (inf = noiseless)")
      ->capture_default_str();
  auto* sync_anchors =
      sync_cmd->add_option("--anchors", sync.anchors, "Number of anchors")
          ->check(CLI::NonNegativeNumber)
          ->capture_default_str();
  sync_cmd->add_flag_callback(
              "--no-anchor", [&sync]() { sync.anchors = 0; },
              "Anchor-free run (same as --anchors 0)")
      ->excludes(sync_anchors);
  sync_cmd->add_option("--eta", sync.eta, "Constant step size")
      ->capture_default_str();
  sync_cmd->add_option("--alpha", sync.alpha, "Dual regularizer")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sync_cmd->add_option("--iters", sync.iters, "Primal-dual iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  MaxcutOpts maxcut;
  CLI::App* maxcut_cmd = app.add_subcommand(
      "maxcut", "Constrained weighted MAX-CUT by manifold rounding");
  add_common_flags(maxcut_cmd, maxcut.common);
  auto* mc_n = maxcut_cmd->add_option("--n", maxcut.n, "Number of vertices")
                   ->check(CLI::PositiveNumber)
                   ->capture_default_str();
  auto* mc_p = maxcut_cmd->add_option("--p", maxcut.p, "Edge probability")
                   ->capture_default_str();
  maxcut_cmd->add_option("--method", maxcut.method, "Relaxation / rounding")
      ->check(CLI::IsMember({"hyperplane", "dist-sphere", "dist-so3"}))
      ->capture_default_str();
  maxcut_cmd
      ->add_option("--d", maxcut.d, "Sphere dimension (sigma_i in S^d)")
      ->capture_default_str();
  auto* mc_forced = maxcut_cmd
                        ->add_option("--forced-edges", maxcut.forced_edges,
                                     "Edges that must be separated")
                        ->check(CLI::NonNegativeNumber)
                        ->capture_default_str();
  maxcut_cmd->add_option("--rounds", maxcut.rounds, "Rounding samples N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  maxcut_cmd->add_option("--tol1", maxcut.tol1, "Constraint-violation tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  maxcut_cmd->add_option("--tol2", maxcut.tol2, "Gradient-norm tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  maxcut_cmd->add_option("--max-iter", maxcut.max_iter, "Iteration cap")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  auto* mc_graph = maxcut_cmd
                       ->add_option("--graph-file", maxcut.graph_file,
                                    "Edge-list file instead of G(n, p)")
                       ->check(CLI::ExistingFile);
  mc_graph->excludes(mc_n);
  mc_graph->excludes(mc_p);
  mc_graph->excludes(mc_forced);

  BoundsOpts bounds;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "Evaluate the convergence-bound formulas for given inputs");
  add_common_flags(bounds_cmd, bounds.common);
  bounds_cmd->add_option("--regime", bounds.regime, "Curvature regime")
      ->check(CLI::IsMember({"hyperbolic", "elliptic", "asymptotic"}))
      ->required();
  bounds_cmd->add_option("--inputs", bounds.inputs_path, "BoundInputs JSON file")
      ->check(CLI::ExistingFile)
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pca_cmd->parsed()) {
      if (pca.common.paper_scale) {
        if (pca_dim->count() == 0) pca.dim = 2000;
        if (pca_samples->count() == 0) pca.samples = 1000;
      }
      if (!(pca.delta > 0.0 && pca.delta <= 1.0)) {
        throw rpd::DomainError("--delta must lie in (0, 1]");
      }
      if (pca.samples > pca.dim) {
        throw rpd::DomainError("--samples must not exceed --dim");
      }
      return cmd_pca(pca);
    }
    if (sync_cmd->parsed()) {
      if (sync.common.paper_scale) {
        if (sync_n->count() == 0) sync.n = 100;
        if (sync_p->count() == 0) sync.p = 0.05;
      }
      if (!(sync.p > 0.0 && sync.p <= 1.0)) {
        throw rpd::DomainError("--p must lie in (0, 1]");
      }
      if (sync.anchors > sync.n) {
        throw rpd::DomainError("--anchors must not exceed --n");
      }
      return cmd_sync(sync);
    }
    if (maxcut_cmd->parsed()) {
      if (maxcut.common.paper_scale) {
        if (mc_n->count() == 0) maxcut.n = 400;
        if (mc_p->count() == 0) maxcut.p = 0.1;
      }
      if (maxcut.graph_file.empty() && !(maxcut.p > 0.0 && maxcut.p <= 1.0)) {
        throw rpd::DomainError("--p must lie in (0, 1]");
      }
      if (maxcut.method != "dist-so3" && maxcut.d < 2) {
        throw rpd::DomainError("--d must be >= 2 for sphere methods");
      }
      return cmd_maxcut(maxcut);
    }
    if (bounds_cmd->parsed()) {
      bounds.out_given = bounds_cmd->count("--out") > 0;
      return cmd_bounds(bounds);
    }
  } catch (const std::exception& e) {
    std::cerr << "ERROR: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
