// CLI contract tests: drive the riemann-pd binary as a subprocess and check
// the documented artifact schemas, seeded determinism, aggregate consistency,
// and error behavior.  The binary path is injected at compile time through
// RPD_CLI_PATH; every run works inside a fresh temporary directory.

#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rpd/bounds.hpp"
#include "rpd/io.hpp"
#include "rpd/solver.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("rpd_cli_" + tag + "_" + std::to_string(::getpid()) +
                        "_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

/// Runs the binary with `args` from inside `workdir`, capturing both streams.
/// `env_prefix` is prepended to the command (e.g. "RIEMANN_PD_THREADS=3").
RunResult run_cli(const std::string& args, const fs::path& workdir,
                  const std::string& env_prefix = "") {
  const fs::path out_file = workdir / "cli_stdout.txt";
  const fs::path err_file = workdir / "cli_stderr.txt";
  std::ostringstream cmd;
  cmd << "cd '" << workdir.string() << "' && " << env_prefix << " '"
      << RPD_CLI_PATH << "' " << args << " > '" << out_file.string() << "' 2> '"
      << err_file.string() << "'";
  const int status = std::system(cmd.str().c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = rpd::read_file(out_file.string());
  result.err = rpd::read_file(err_file.string());
  return result;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream fields(line);
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

/// Removes the final column of every CSV line (used to discard wall-clock
/// columns before byte comparison).
std::string drop_last_column(const std::string& text) {
  std::ostringstream out;
  for (const std::string& line : split_lines(text)) {
    const auto pos = line.rfind(',');
    out << (pos == std::string::npos ? line : line.substr(0, pos)) << '\n';
  }
  return out.str();
}

// Same fold order as the driver so recomputation matches bit for bit.
double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() <= 1) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pca artifacts follow the documented schema") {
  const fs::path dir = fresh_dir("pca_schema");
  const fs::path out = dir / "results";
  const auto run = run_cli("pca --seed 7 --trials 3 --dim 24 --samples 16 "
                           "--snr 1 --delta 0.9 --alpha 0.1 --out '" +
                               out.string() + "'",
                           dir);
  CAPTURE(run.err);
  REQUIRE(run.exit_code == 0);
  CHECK(run.err.empty());

  const auto trials =
      parse_csv(rpd::read_file((out / "pca_trials.csv").string()));
  REQUIRE(trials.size() == 7);  // header + 3 trials x {pd, spectral}
  const std::vector<std::string> header = {"trial", "snr",     "delta",
                                           "T",     "d",       "method",
                                           "overlap", "cv",    "runtime_ms"};
  CHECK(trials[0] == header);
  for (std::size_t r = 1; r < trials.size(); ++r) {
    const auto& row = trials[r];
    REQUIRE(row.size() == 9);
    CHECK(row[0] == std::to_string((r - 1) / 2));
    CHECK(row[1] == "1");
    CHECK(to_double(row[2]) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(row[3] == "16");
    CHECK(row[4] == "24");
    CHECK(row[5] == ((r % 2) == 1 ? "pd" : "spectral"));
    const double overlap = to_double(row[6]);
    CHECK(overlap >= 0.0);
    CHECK(overlap <= 1.0 + 1e-12);
    CHECK(to_double(row[7]) >= 0.0);
    CHECK(to_double(row[8]) >= 0.0);
  }

  // Aggregate rows equal recomputation from the per-trial rows.
  const auto agg =
      parse_csv(rpd::read_file((out / "pca_aggregate.csv").string()));
  REQUIRE(agg.size() == 3);
  CHECK(agg[0] == std::vector<std::string>{"method", "trials", "mean_overlap",
                                           "se_overlap", "mean_cv", "se_cv"});
  for (int m = 0; m < 2; ++m) {
    const auto& row = agg[static_cast<std::size_t>(1 + m)];
    REQUIRE(row.size() == 6);
    const std::string method = m == 0 ? "pd" : "spectral";
    CHECK(row[0] == method);
    CHECK(row[1] == "3");
    std::vector<double> overlaps;
    std::vector<double> cvs;
    for (std::size_t r = 1; r < trials.size(); ++r) {
      if (trials[r][5] == method) {
        overlaps.push_back(to_double(trials[r][6]));
        cvs.push_back(to_double(trials[r][7]));
      }
    }
    CHECK(to_double(row[2]) == mean_of(overlaps));
    CHECK(to_double(row[3]) == standard_error(overlaps));
    CHECK(to_double(row[4]) == mean_of(cvs));
    CHECK(to_double(row[5]) == standard_error(cvs));
  }

  const auto manifest =
      nlohmann::json::parse(rpd::read_file((out / "manifest.json").string()));
  CHECK(manifest.at("command") == "pca");
  CHECK(manifest.at("master_seed") == 7);
  CHECK(manifest.at("trials") == 3);
  CHECK(manifest.at("trial_seed_rule") == "split(master_seed, trial_index)");
  CHECK(manifest.at("trial_wall_ms").size() == 3);
  CHECK(manifest.at("config").at("snr") == 1.0);
  CHECK(manifest.at("config").at("dim") == 24);
  CHECK(manifest.at("config").at("samples") == 16);
  CHECK(manifest.at("config").at("method") == "both");
  auto listed = [&](const std::string& name) {
    for (const auto& o : manifest.at("outputs")) {
      if (o.get<std::string>() == (out / name).string()) return true;
    }
    return false;
  };
  CHECK(listed("pca_trials.csv"));
  CHECK(listed("pca_aggregate.csv"));
  CHECK(listed("manifest.json"));
}

TEST_CASE("pca reruns are byte-identical apart from wall-clock columns") {
  const std::string params =
      "pca --seed 11 --trials 2 --dim 20 --samples 12 --snr 0.8 --delta 0.5 ";
  const fs::path dir_a = fresh_dir("pca_det_a");
  const fs::path dir_b = fresh_dir("pca_det_b");
  const fs::path dir_c = fresh_dir("pca_det_c");
  const fs::path dir_d = fresh_dir("pca_det_d");
  REQUIRE(run_cli(params + "--out r", dir_a).exit_code == 0);
  REQUIRE(run_cli(params + "--out r", dir_b).exit_code == 0);
  REQUIRE(run_cli("pca --seed 12 --trials 2 --dim 20 --samples 12 --snr 0.8 "
                  "--delta 0.5 --out r",
                  dir_c)
              .exit_code == 0);
  REQUIRE(run_cli(params + "--out r", dir_d, "RIEMANN_PD_THREADS=3")
              .exit_code == 0);

  auto trials_of = [](const fs::path& dir) {
    return rpd::read_file((dir / "r" / "pca_trials.csv").string());
  };
  auto aggregate_of = [](const fs::path& dir) {
    return rpd::read_file((dir / "r" / "pca_aggregate.csv").string());
  };
  // Same seed: identical results; the runtime_ms column is the only
  // permitted difference.
  CHECK(drop_last_column(trials_of(dir_a)) == drop_last_column(trials_of(dir_b)));
  CHECK(aggregate_of(dir_a) == aggregate_of(dir_b));
  // Thread cap must not change results, only scheduling.
  CHECK(drop_last_column(trials_of(dir_a)) == drop_last_column(trials_of(dir_d)));
  CHECK(aggregate_of(dir_a) == aggregate_of(dir_d));
  // Different seed: different trial rows.
  CHECK(drop_last_column(trials_of(dir_a)) != drop_last_column(trials_of(dir_c)));

  // Restricting --method restricts both CSVs to that estimator.
  const fs::path dir_e = fresh_dir("pca_det_e");
  REQUIRE(run_cli(params + "--method pd --out r", dir_e).exit_code == 0);
  const auto only_pd = parse_csv(trials_of(dir_e));
  REQUIRE(only_pd.size() == 3);  // header + one pd row per trial
  CHECK(only_pd[1][5] == "pd");
  CHECK(only_pd[2][5] == "pd");
  const auto agg_pd = parse_csv(aggregate_of(dir_e));
  REQUIRE(agg_pd.size() == 2);
  CHECK(agg_pd[1][0] == "pd");
}

TEST_CASE("sync artifacts cover every trial and the aggregate recomputes") {
  const fs::path dir = fresh_dir("sync_schema");
  const fs::path out = dir / "results";
  const int n = 6;
  const long long iters = 40;
  const auto run = run_cli(
      "sync --seed 3 --trials 2 --n 6 --p 0.9 --beta 10 --anchors 1 "
      "--eta 0.05 --alpha 0.001 --iters 40 --out '" +
          out.string() + "'",
      dir);
  CAPTURE(run.err);
  REQUIRE(run.exit_code == 0);
  CHECK(run.err.empty());

  std::vector<double> final_frobs;
  std::vector<double> final_residuals;
  std::vector<double> ratios;
  for (int k = 0; k < 2; ++k) {
    const auto rows = parse_csv(rpd::read_file(
        (out / ("sync_trial_" + std::to_string(k) + ".csv")).string()));
    REQUIRE(rows.size() == static_cast<std::size_t>(iters) * n + 1);
    CHECK(rows[0] == std::vector<std::string>{"t", "vertex", "frobenius_error",
                                              "residual"});
    double first_residual = -1.0;
    double last_residual = -1.0;
    double last_max_frob = 0.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      REQUIRE(row.size() == 4);
      const long long t = (static_cast<long long>(r) - 1) / n + 1;
      const int vertex = static_cast<int>((r - 1) % n);
      CHECK(row[0] == std::to_string(t));
      CHECK(row[1] == std::to_string(vertex));
      const double frob = to_double(row[2]);
      CHECK(frob >= 0.0);
      CHECK(frob <= 2.0 * std::sqrt(2.0) + 1e-9);  // diameter of SO(3) in d_F
      const double residual = to_double(row[3]);
      CHECK(residual >= 0.0);
      if (t == 1 && first_residual < 0.0) first_residual = residual;
      if (t == iters) {
        last_residual = residual;
        last_max_frob = std::max(last_max_frob, frob);
      }
    }
    final_frobs.push_back(last_max_frob);
    final_residuals.push_back(last_residual);
    ratios.push_back(last_residual / first_residual);
  }

  const auto agg =
      parse_csv(rpd::read_file((out / "sync_aggregate.csv").string()));
  REQUIRE(agg.size() == 2);
  CHECK(agg[0] == std::vector<std::string>{
                      "trials", "mean_final_max_frob", "se_final_max_frob",
                      "mean_final_residual", "se_final_residual",
                      "mean_residual_ratio", "se_residual_ratio"});
  const auto& row = agg[1];
  REQUIRE(row.size() == 7);
  CHECK(row[0] == "2");
  CHECK(to_double(row[1]) == mean_of(final_frobs));
  CHECK(to_double(row[2]) == standard_error(final_frobs));
  CHECK(to_double(row[3]) == mean_of(final_residuals));
  CHECK(to_double(row[4]) == standard_error(final_residuals));
  CHECK(to_double(row[5]) == doctest::Approx(mean_of(ratios)).epsilon(1e-12));
  CHECK(to_double(row[6]) ==
        doctest::Approx(standard_error(ratios)).epsilon(1e-12));

  const auto manifest =
      nlohmann::json::parse(rpd::read_file((out / "manifest.json").string()));
  CHECK(manifest.at("command") == "sync");
  CHECK(manifest.at("config").at("anchors") == 1);
  CHECK(manifest.at("config").at("iters") == 40);
}

TEST_CASE("sync anchor flags agree and conflict loudly") {
  const fs::path dir = fresh_dir("sync_flags");
  const auto free_run = run_cli(
      "sync --seed 1 --trials 1 --n 4 --p 1.0 --beta 10 --iters 5 "
      "--no-anchor --out r",
      dir);
  CAPTURE(free_run.err);
  REQUIRE(free_run.exit_code == 0);
  const auto manifest = nlohmann::json::parse(
      rpd::read_file((dir / "r" / "manifest.json").string()));
  CHECK(manifest.at("config").at("anchors") == 0);

  const auto conflict = run_cli(
      "sync --seed 1 --trials 1 --n 4 --iters 5 --no-anchor --anchors 2 "
      "--out r2",
      dir);
  CHECK(conflict.exit_code != 0);
  CHECK(contains(conflict.err, "--anchors"));

  const auto too_many =
      run_cli("sync --seed 1 --trials 1 --n 5 --anchors 7 --iters 5 --out r3",
              dir);
  CHECK(too_many.exit_code == 1);
  CHECK(contains(too_many.err, "ERROR:"));
  CHECK(contains(too_many.err, "--anchors"));
}

TEST_CASE("maxcut results include brute-force ratios on small instances") {
  const fs::path dir = fresh_dir("maxcut_schema");
  const fs::path out = dir / "results";
  const auto run = run_cli(
      "maxcut --seed 5 --trials 2 --n 10 --p 0.6 --method hyperplane --d 3 "
      "--rounds 50 --max-iter 400 --out '" +
          out.string() + "'",
      dir);
  CAPTURE(run.err);
  REQUIRE(run.exit_code == 0);
  CHECK(run.err.empty());

  const auto rows =
      parse_csv(rpd::read_file((out / "maxcut_results.csv").string()));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{
                       "instance_id", "n", "p", "method", "iterations",
                       "delta1", "delta2", "best_cut", "bf_optimum", "ratio"});
  std::vector<double> cuts;
  std::vector<double> ratios;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    REQUIRE(row.size() == 10);
    CHECK(row[0] == std::to_string(r - 1));
    CHECK(row[1] == "10");
    CHECK(to_double(row[2]) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(row[3] == "hyperplane");
    const long long iterations = std::stoll(row[4]);
    CHECK(iterations > 0);
    CHECK(iterations <= 400);
    CHECK(to_double(row[5]) >= 0.0);
    CHECK(to_double(row[6]) >= 0.0);
    const double best_cut = to_double(row[7]);
    const double bf = to_double(row[8]);
    const double ratio = to_double(row[9]);
    CHECK(std::isfinite(bf));
    CHECK(bf > 0.0);
    CHECK(best_cut <= bf + 1e-9);  // a rounded cut can never beat the optimum
    CHECK(ratio == best_cut / bf);
    CHECK(ratio >= 0.8);
    cuts.push_back(best_cut);
    ratios.push_back(ratio);
  }

  const auto agg =
      parse_csv(rpd::read_file((out / "maxcut_aggregate.csv").string()));
  REQUIRE(agg.size() == 2);
  CHECK(agg[0] == std::vector<std::string>{"trials", "mean_best_cut",
                                           "se_best_cut", "mean_ratio",
                                           "se_ratio"});
  CHECK(agg[1][0] == "2");
  CHECK(to_double(agg[1][1]) == mean_of(cuts));
  CHECK(to_double(agg[1][2]) == standard_error(cuts));
  CHECK(to_double(agg[1][3]) == mean_of(ratios));
  CHECK(to_double(agg[1][4]) == standard_error(ratios));
}

TEST_CASE("maxcut honors --graph-file and names methods per contract") {
  const fs::path dir = fresh_dir("maxcut_file");
  const fs::path graph = dir / "path3.graph";
  rpd::write_file_atomic(graph.string(),
                         "# three-vertex path, forced to cut its first edge\n"
                         "0 1 1.0\n"
                         "1 2 1.0\n"
                         "#forced 0 1\n");

  const auto run = run_cli("maxcut --seed 9 --trials 2 --graph-file '" +
                               graph.string() +
                               "' --method dist-sphere --d 3 --rounds 200 "
                               "--max-iter 800 --out r",
                           dir);
  CAPTURE(run.err);
  REQUIRE(run.exit_code == 0);
  const auto rows =
      parse_csv(rpd::read_file((dir / "r" / "maxcut_results.csv").string()));
  REQUIRE(rows.size() == 3);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    CHECK(row[1] == "3");
    CHECK(row[2] == "nan");  // p is meaningless for file-backed instances
    CHECK(row[3] == "dist_sphere");
    // Forced-aware optimum of the path: cut both edges by isolating vertex 1.
    CHECK(to_double(row[8]) == 2.0);
    CHECK(to_double(row[9]) <= 1.0 + 1e-9);
    CHECK(to_double(row[9]) >= 0.5);
  }

  const auto so3 = run_cli("maxcut --seed 9 --trials 1 --graph-file '" +
                               graph.string() +
                               "' --method dist-so3 --rounds 100 "
                               "--max-iter 300 --out r_so3",
                           dir);
  CAPTURE(so3.err);
  REQUIRE(so3.exit_code == 0);
  const auto so3_rows = parse_csv(
      rpd::read_file((dir / "r_so3" / "maxcut_results.csv").string()));
  REQUIRE(so3_rows.size() == 2);
  CHECK(so3_rows[1][3] == "dist_so3");

  const auto conflict = run_cli("maxcut --graph-file '" + graph.string() +
                                    "' --n 12 --out r_conflict",
                                dir);
  CHECK(conflict.exit_code != 0);
  CHECK(contains(conflict.err, "--graph-file"));

  const fs::path bad = dir / "bad.graph";
  rpd::write_file_atomic(bad.string(), "0 0 1.0\n");
  const auto malformed = run_cli(
      "maxcut --graph-file '" + bad.string() + "' --out r_bad", dir);
  CHECK(malformed.exit_code == 1);
  CHECK(contains(malformed.err, "ERROR:"));
  CHECK_FALSE(fs::exists(dir / "r_bad" / "maxcut_results.csv"));
}

TEST_CASE("bounds prints three labelled values and writes only with --out") {
  const fs::path dir = fresh_dir("bounds");
  const fs::path flat_inputs = dir / "flat.json";
  rpd::write_file_atomic(flat_inputs.string(),
                         "{\"kappa\": 0.0, \"R\": 1.0, \"m\": 1, \"G\": 1.0,"
                         " \"M_f\": 1.0, \"M_h\": 1.0, \"alpha\": 1.0,"
                         " \"T\": 100, \"schedule\": {\"type\":"
                         " \"inverse_sqrt\"}}\n");

  const auto run = run_cli(
      "bounds --regime hyperbolic --inputs '" + flat_inputs.string() + "'",
      dir);
  CAPTURE(run.err);
  REQUIRE(run.exit_code == 0);
  const auto lines = split_lines(run.out);
  REQUIRE(lines.size() == 3);

  // Hand value for the Hadamard bound at these inputs: the curvature terms
  // vanish, A = 4 + (1 + 1)^2 = 8, and with eta_t = 1/sqrt(t+1) over T = 100
  // steps the quotient is (1/2 + 4 * H_100) / (sum_{k=1}^{100} 1/sqrt(k)).
  REQUIRE(contains(lines[0], "thm1,"));
  const double thm1 = to_double(lines[0].substr(5));
  CHECK(std::abs(thm1 - 1.1430856876157882) <= 1e-9);
  CHECK(lines[1] == "thm2,n/a");  // requires kappa > 0
  REQUIRE(contains(lines[2], "thm5,"));

  // The printed values equal direct library evaluation on the same inputs.
  rpd::BoundInputs inputs;
  inputs.kappa = 0.0;
  inputs.R = 1.0;
  inputs.m = 1;
  inputs.G = 1.0;
  inputs.M_f = 1.0;
  inputs.M_h = 1.0;
  inputs.alpha = 1.0;
  inputs.T = 100;
  inputs.eta = rpd::StepSchedule::inverse_sqrt();
  CHECK(lines[0] == "thm1," + rpd::format_double(rpd::bound_thm1(inputs)));
  CHECK(lines[2] == "thm5," + rpd::format_double(rpd::bound_thm5(inputs)));

  // Without --out nothing is written, not even the default directory.
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK_FALSE(fs::exists(dir / "bounds.csv"));

  // With --out the CSV mirrors stdout and a manifest appears.
  const auto with_out = run_cli("bounds --regime hyperbolic --inputs '" +
                                    flat_inputs.string() + "' --out r",
                                dir);
  REQUIRE(with_out.exit_code == 0);
  const auto csv =
      parse_csv(rpd::read_file((dir / "r" / "bounds.csv").string()));
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] == std::vector<std::string>{"bound", "value"});
  for (int i = 0; i < 3; ++i) {
    CHECK(csv[static_cast<std::size_t>(i + 1)][0] + "," +
              csv[static_cast<std::size_t>(i + 1)][1] ==
          lines[static_cast<std::size_t>(i)]);
  }
  const auto manifest = nlohmann::json::parse(
      rpd::read_file((dir / "r" / "manifest.json").string()));
  CHECK(manifest.at("command") == "bounds");
  CHECK(manifest.at("config").at("regime") == "hyperbolic");

  // A regime whose bound is undefined for the inputs is a loud failure.
  const auto wrong_regime = run_cli(
      "bounds --regime elliptic --inputs '" + flat_inputs.string() + "'", dir);
  CHECK(wrong_regime.exit_code == 1);
  CHECK(contains(wrong_regime.err, "ERROR:"));
  CHECK(contains(wrong_regime.err, "elliptic"));

  // Elliptic inputs flip which lines are defined.
  const fs::path round_inputs = dir / "round.json";
  rpd::write_file_atomic(round_inputs.string(),
                         "{\"kappa\": 1.0, \"d0\": 0.5, \"m\": 1, \"G\": 1.0,"
                         " \"M_f\": 1.0, \"M_h\": 1.0, \"alpha\": 1.0,"
                         " \"T\": 100, \"schedule\": {\"type\":"
                         " \"inverse_sqrt\"}}\n");
  const auto elliptic = run_cli(
      "bounds --regime elliptic --inputs '" + round_inputs.string() + "'",
      dir);
  CAPTURE(elliptic.err);
  REQUIRE(elliptic.exit_code == 0);
  const auto elliptic_lines = split_lines(elliptic.out);
  REQUIRE(elliptic_lines.size() == 3);
  CHECK(elliptic_lines[0] == "thm1,n/a");  // requires kappa <= 0
  rpd::BoundInputs round = inputs;
  round.kappa = 1.0;
  round.d0 = 0.5;
  round.R = 0.0;
  CHECK(elliptic_lines[1] ==
        "thm2," + rpd::format_double(rpd::bound_thm2(round)));

  // Malformed input files fail with the machine-readable error line.
  const fs::path broken = dir / "broken.json";
  rpd::write_file_atomic(broken.string(), "{not json\n");
  const auto bad_json = run_cli(
      "bounds --regime hyperbolic --inputs '" + broken.string() + "'", dir);
  CHECK(bad_json.exit_code == 1);
  CHECK(contains(bad_json.err, "ERROR:"));
  CHECK(contains(bad_json.err, "JSON"));

  const fs::path bad_schedule = dir / "schedule.json";
  rpd::write_file_atomic(
      bad_schedule.string(),
      "{\"kappa\": 0.0, \"T\": 10, \"schedule\": {\"type\": \"warp\"}}\n");
  const auto bad_sched = run_cli(
      "bounds --regime hyperbolic --inputs '" + bad_schedule.string() + "'",
      dir);
  CHECK(bad_sched.exit_code == 1);
  CHECK(contains(bad_sched.err, "ERROR:"));
  CHECK(contains(bad_sched.err, "schedule"));

  const auto missing = run_cli(
      "bounds --regime hyperbolic --inputs '" + (dir / "nope.json").string() +
          "'",
      dir);
  CHECK(missing.exit_code != 0);
  CHECK(contains(missing.err, "--inputs"));
}

TEST_CASE("usage errors name the offending flag") {
  const fs::path dir = fresh_dir("usage");

  const auto delta = run_cli("pca --delta 1.5 --trials 1 --out r", dir);
  CHECK(delta.exit_code == 1);
  CHECK(contains(delta.err, "ERROR:"));
  CHECK(contains(delta.err, "--delta"));

  const auto samples =
      run_cli("pca --samples 50 --dim 20 --trials 1 --out r", dir);
  CHECK(samples.exit_code == 1);
  CHECK(contains(samples.err, "ERROR:"));
  CHECK(contains(samples.err, "--samples"));

  const auto method = run_cli("pca --method bogus --out r", dir);
  CHECK(method.exit_code != 0);
  CHECK(contains(method.err, "--method"));

  const auto trials = run_cli("pca --trials 0 --out r", dir);
  CHECK(trials.exit_code != 0);
  CHECK(contains(trials.err, "--trials"));

  const auto edge_p = run_cli("maxcut --p 0 --trials 1 --out r", dir);
  CHECK(edge_p.exit_code == 1);
  CHECK(contains(edge_p.err, "ERROR:"));
  CHECK(contains(edge_p.err, "--p"));

  const auto dim = run_cli("maxcut --d 1 --trials 1 --out r", dir);
  CHECK(dim.exit_code == 1);
  CHECK(contains(dim.err, "ERROR:"));
  CHECK(contains(dim.err, "--d"));

  const auto regime =
      run_cli("bounds --regime warp --inputs missing.json", dir);
  CHECK(regime.exit_code != 0);
  CHECK(contains(regime.err, "--regime"));

  const auto bare_bounds = run_cli("bounds", dir);
  CHECK(bare_bounds.exit_code != 0);
  CHECK(contains(bare_bounds.err, "required"));

  const auto no_subcommand = run_cli("", dir);
  CHECK(no_subcommand.exit_code != 0);
  CHECK(contains(no_subcommand.err, "subcommand"));

  const auto unknown = run_cli("pca --bogus 3 --out r", dir);
  CHECK(unknown.exit_code != 0);
  CHECK(contains(unknown.err, "--bogus"));
}

TEST_CASE("failed runs leave no partial artifacts behind") {
  // An output directory blocked by a regular file: the flush fails after the
  // trials complete, and nothing may survive.
  const fs::path dir = fresh_dir("no_partials");
  rpd::write_file_atomic((dir / "blocker").string(), "occupied\n");
  const auto blocked = run_cli(
      "pca --seed 2 --trials 1 --dim 8 --samples 6 --out blocker/sub", dir);
  CHECK(blocked.exit_code == 1);
  CHECK(contains(blocked.err, "ERROR:"));
  CHECK(fs::is_regular_file(dir / "blocker"));
  std::size_t csv_count = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") ++csv_count;
  }
  CHECK(csv_count == 0);

  // A trial that throws (connected-graph generation cannot succeed) aborts
  // the run before any file is written.
  const auto failing_trial = run_cli(
      "maxcut --seed 2 --trials 1 --n 30 --p 1e-9 --out r_fail", dir);
  CHECK(failing_trial.exit_code == 1);
  CHECK(contains(failing_trial.err, "ERROR:"));
  CHECK_FALSE(fs::exists(dir / "r_fail"));
}

}  // TEST_SUITE("cli")
