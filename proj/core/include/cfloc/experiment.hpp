// Copyright 2026 The cfloc Authors
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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfloc/config.hpp"
#include "cfloc/fingerprint.hpp"
#include "cfloc/fusion.hpp"
#include "cfloc/gpr.hpp"
#include "cfloc/metrics.hpp"
#include "cfloc/scenario.hpp"

namespace cfloc {

/// How the online AOA of each AP is produced.
enum class AoaMode {
  kMusic,      // MUSIC on the received blocks, half-plane resolved from the array side
  kCrb,        // true angle plus Gaussian noise at the CRB variance
  kGeometric,  // true angle plus the offline measurement noise
};

std::string_view to_string(AoaMode m);
AoaMode parse_aoa_mode(std::string_view name);

/// Algorithm tags accepted in `methods`: dist_gpr (expands to the four
/// fusion variants dist_gpr-median, -mean, -bayesian, -zscore, each also
/// accepted alone), cent_hybrid, cent_rss, cent_aoa, cent_knn, cent_lr,
/// dist_knn, dist_lr.
std::vector<std::string> expand_methods(const std::vector<std::string>& tags);

/// Sweep axes: N, K, L, shadow_sigma_db, zscore_threshold.
bool is_sweep_axis(const std::string& axis);

struct ExperimentSpec {
  ScenarioConfig base;
  std::string sweep_axis;  // empty for a single run
  std::vector<double> sweep_values;
  int num_setups = 10;
  int num_test_points = 100;
  std::vector<std::string> methods{"dist_gpr", "cent_hybrid", "cent_rss", "cent_aoa",
                                   "cent_knn", "cent_lr",     "dist_knn", "dist_lr"};
  AoaMode aoa_mode = AoaMode::kMusic;
  double zscore_threshold = kDefaultZScoreThreshold;
  double music_grid_step_deg = 0.05;
  std::string output_dir = "out";
  int threads = 1;
  TrainConfig train;

  /// Throws ConfigError naming the offending field, including invalid sweep values.
  void validate() const;

  /// The configuration of one sweep point; the z-score threshold is returned
  /// through `zscore_threshold`.
  ScenarioConfig config_for(double sweep_value, double& zscore_threshold) const;

  /// Number of sweep points (1 without a sweep).
  std::size_t num_sweep_points() const { return sweep_axis.empty() ? 1 : sweep_values.size(); }

  /// Label of sweep point i as written to the summary ("all" without a sweep).
  std::string sweep_label(std::size_t i) const;
};

/// Reads a flat JSON object whose keys are ScenarioConfig and ExperimentSpec
/// field names. Unknown keys are rejected with ConfigError.
ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::string& path);

/// Scenario seed of a setup. It does not depend on the sweep point, so all
/// sweep values see the same deployments (common random numbers).
std::uint64_t setup_seed(std::uint64_t master_seed, long setup_id);

/// Simulated data of one setup: deployment, per-AP offline fingerprints and
/// per-test-point online observations (indexed [test][ap]).
struct SetupData {
  Scenario scenario;
  std::vector<FingerprintDB> fingerprints;
  std::vector<std::vector<TestObservation>> observations;
  long music_estimates = 0;
  long degenerate_spectra = 0;
};

/// Simulates one setup from cfg.seed and the setup id.
SetupData simulate_setup(const ScenarioConfig& cfg, long setup_id, int num_test_points, AoaMode mode,
                         double music_grid_step_deg = 0.05);

struct Failure {
  std::string sweep_value;
  long setup_id = 0;
  std::string method;  // "*" when the whole setup failed
  std::string message;
  long rows_lost = 0;
};

struct ModelDiagnostics {
  std::string sweep_value;
  long setup_id = 0;
  std::string model;  // e.g. "ap3" or "cent_rss"
  char coordinate = 'x';
  Hyperparams hyper;  // in standardised units
  TrainDiagnostics train;
};

struct SweepResult {
  std::string label;
  std::vector<TrialRecord> trials;  // sorted by (setup, test, method order)
  std::vector<double> method_runtime_s;  // parallel to the expanded method list
  double wall_time_s = 0.0;
};

struct ExperimentResult {
  std::vector<std::string> methods;  // expanded
  std::vector<SweepResult> sweeps;
  std::vector<Failure> failures;
  std::vector<ModelDiagnostics> diagnostics;
  long degenerate_spectra = 0;
  long music_estimates = 0;
};

/// Runs every (sweep point, setup) cell. Fingerprints and models are built
/// once per cell and shared by all test points and fusion variants. Output
/// does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct SummaryRow {
  std::string sweep_value;
  std::string method;
  std::size_t n = 0;
  double mean_err_m = 0.0;
  double mean_ellipse_area_m2 = 0.0;
  double coverage_pct = 0.0;
  std::array<double, 9> err_quantiles{};  // p10 .. p90
  double runtime_s = 0.0;
};

/// Quantile of sorted data by linear interpolation between order statistics
/// (position p (n - 1)). Throws DomainError for empty data or p outside [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);

/// One row per method in order of first appearance. runtime_s is left NaN.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials, const std::string& sweep_value);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Summary rows of every sweep point with measured per-method runtimes.
std::vector<SummaryRow> summarize(const ExperimentResult& result);

/// File name of the trial CSV of sweep point i.
std::string trial_file_name(const ExperimentSpec& spec, std::size_t i);

/// JSON run report: seeds, configuration, model diagnostics, counters and failures.
std::string report_json(const ExperimentSpec& spec, const ExperimentResult& result);

/// Writes trial CSVs, summary.csv and report.json into spec.output_dir.
void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace cfloc
