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

// cfloc: run localization experiments and summarize trial files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfloc/errors.hpp"
#include "cfloc/experiment.hpp"
#include "cfloc/fingerprint.hpp"
#include "cfloc/scenario.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw cfloc::ConfigError("sweep_values", "malformed number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct RunArgs {
  std::string config;
  std::string sweep_axis;
  std::string sweep_values;
  std::string out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

int cmd_run(const RunArgs& a) {
  cfloc::ExperimentSpec spec = cfloc::load_experiment_spec(a.config);
  if (!a.sweep_axis.empty()) spec.sweep_axis = a.sweep_axis;
  if (!a.sweep_values.empty()) spec.sweep_values = parse_values(a.sweep_values);
  if (!a.out.empty()) spec.output_dir = a.out;
  if (a.threads) spec.threads = *a.threads;
  if (a.seed) spec.base.seed = *a.seed;

  const auto result = cfloc::run_experiment(spec);
  cfloc::write_experiment_outputs(spec, result);

  std::size_t rows = 0;
  for (const auto& s : result.sweeps) rows += s.trials.size();
  std::cerr << "wrote " << rows << " trial rows to " << spec.output_dir << "\n";
  for (const auto& f : result.failures)
    std::cerr << "failure: sweep " << f.sweep_value << " setup " << f.setup_id << " method " << f.method << ": "
              << f.message << "\n";
  if (!result.failures.empty()) {
    std::cerr << result.failures.size() << " failed cell(s)\n";
    return 1;
  }
  return 0;
}

int cmd_summarize(const std::string& in_path, const std::string& out_path, const std::string& sweep_value) {
  std::ifstream in(in_path);
  if (!in) throw cfloc::ParseError("cannot open '" + in_path + "'");
  const auto trials = cfloc::read_trials(in);
  const auto rows = cfloc::summarize(trials, sweep_value);
  if (out_path.empty() || out_path == "-") {
    cfloc::write_summary_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    cfloc::write_summary_csv(out, rows);
  }
  return 0;
}

int cmd_scenario(const std::string& config, long setup) {
  const auto spec = cfloc::load_experiment_spec(config);
  cfloc::ScenarioConfig cfg = spec.base;
  cfg.seed = cfloc::setup_seed(spec.base.seed, setup);
  std::cout << cfloc::scenario_to_json(
      cfloc::generate_scenario(cfg, static_cast<std::size_t>(spec.num_test_points)));
  return 0;
}

int cmd_fingerprints(const std::string& config, long setup, const std::string& out_dir) {
  const auto spec = cfloc::load_experiment_spec(config);
  spec.validate();
  const auto data = cfloc::simulate_setup(spec.base, setup, 0, spec.aoa_mode, spec.music_grid_step_deg);
  std::filesystem::create_directories(out_dir);
  for (const auto& db : data.fingerprints) {
    const auto path = std::filesystem::path(out_dir) / ("fingerprints_ap" + std::to_string(db.ap_index) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    cfloc::write_fingerprint_csv(out, db);
  }
  std::cerr << "wrote " << data.fingerprints.size() << " fingerprint files to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free fingerprint localization experiments"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run_cmd->add_option("--config", run.config, "JSON config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--sweep-axis", run.sweep_axis, "N, K, L, shadow_sigma_db or zscore_threshold");
  run_cmd->add_option("--sweep-values", run.sweep_values, "Comma-separated sweep values");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--threads", run.threads, "Worker threads");
  run_cmd->add_option("--seed", run.seed, "Master seed");

  std::string in_path, out_path, sweep_value = "all";
  auto* sum_cmd = app.add_subcommand("summarize", "Summarize a trial CSV");
  sum_cmd->add_option("--in", in_path, "Trial CSV")->required()->check(CLI::ExistingFile);
  sum_cmd->add_option("--out", out_path, "Summary CSV (stdout if omitted)");
  sum_cmd->add_option("--sweep-value", sweep_value, "Value written to the sweep_value column");

  std::string config;
  long setup = 0;
  auto* scn_cmd = app.add_subcommand("scenario", "Print the deployment of one setup as JSON");
  scn_cmd->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  scn_cmd->add_option("--setup", setup, "Setup id");

  std::string fp_out = "fingerprints";
  auto* fp_cmd = app.add_subcommand("fingerprints", "Write the offline fingerprints of one setup");
  fp_cmd->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  fp_cmd->add_option("--setup", setup, "Setup id");
  fp_cmd->add_option("--out", fp_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*sum_cmd) return cmd_summarize(in_path, out_path, sweep_value);
    if (*scn_cmd) return cmd_scenario(config, setup);
    if (*fp_cmd) return cmd_fingerprints(config, setup, fp_out);
  } catch (const cfloc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cfloc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
