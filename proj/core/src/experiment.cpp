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

#include "cfloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "cfloc/baselines.hpp"
#include "cfloc/channel.hpp"
#include "cfloc/crb.hpp"
#include "cfloc/errors.hpp"
#include "cfloc/fingerprint.hpp"
#include "cfloc/scenario.hpp"
#include "cfloc/shadowing.hpp"
#include "csv_util.hpp"
#include "json_util.hpp"

namespace cfloc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

enum class Kind { kDistGpr, kCentHybrid, kCentRss, kCentAoa, kCentKnn, kCentLr, kDistKnn, kDistLr };

struct Method {
  std::string name;
  Kind kind;
  FusionMethod fusion = FusionMethod::kMedian;
};

const std::vector<std::pair<std::string, Kind>>& plain_tags() {
  static const std::vector<std::pair<std::string, Kind>> tags{
      {"cent_hybrid", Kind::kCentHybrid}, {"cent_rss", Kind::kCentRss}, {"cent_aoa", Kind::kCentAoa},
      {"cent_knn", Kind::kCentKnn},       {"cent_lr", Kind::kCentLr},   {"dist_knn", Kind::kDistKnn},
      {"dist_lr", Kind::kDistLr}};
  return tags;
}

constexpr std::array<FusionMethod, 4> kFusions{FusionMethod::kMedian, FusionMethod::kMean, FusionMethod::kBayesian,
                                               FusionMethod::kZScore};

Method parse_method(const std::string& name) {
  for (const auto& [tag, kind] : plain_tags())
    if (tag == name) return {name, kind};
  const std::string prefix = "dist_gpr-";
  if (name.rfind(prefix, 0) == 0) return {name, Kind::kDistGpr, parse_fusion_method(name.substr(prefix.size()))};
  throw ConfigError("methods", "unknown algorithm tag '" + name + "'");
}

std::vector<Method> parse_methods(const std::vector<std::string>& expanded) {
  std::vector<Method> out;
  for (const auto& m : expanded) out.push_back(parse_method(m));
  return out;
}

bool needs(const std::vector<Method>& ms, Kind k) {
  return std::any_of(ms.begin(), ms.end(), [&](const Method& m) { return m.kind == k; });
}

/// Offline and online simulation of one setup.
class SetupSimulator {
 public:
  SetupSimulator(const ScenarioConfig& cfg, long setup_id)
      : cfg_(cfg), setup_(setup_id), model_(ArrayModel::from(cfg)) {}

  std::uint64_t setup_seed() const { return cfloc::setup_seed(cfg_.seed, setup_); }

  double beta_linear(int ap, const Point2& loc, double shadow_db) const {
    const double db = pathloss_db(data_.scenario.ap_positions[static_cast<std::size_t>(ap)], loc, cfg_) + shadow_db;
    return std::pow(10.0, db / 10.0);
  }

  void build_offline() {
    ScenarioConfig sc = cfg_;
    sc.seed = setup_seed();
    data_.scenario = generate_scenario(sc, static_cast<std::size_t>(num_test_points_));
    sampler_.emplace(data_.scenario);
    const std::uint64_t seed = sc.seed;
    const int l = data_.scenario.num_aps();
    const int k = data_.scenario.num_rps();
    rp_shadow_.clear();
    data_.fingerprints.clear();
    for (int a = 0; a < l; ++a) {
      auto srng = make_stream(seed, StreamTag::kRpShadow, {static_cast<std::uint64_t>(a)});
      rp_shadow_.push_back(sampler_->sample_rps(srng));
      const Point2 ap = data_.scenario.ap_positions[static_cast<std::size_t>(a)].ground();
      FingerprintDB db;
      db.ap_index = a;
      db.rp_positions = data_.scenario.rp_positions;
      db.rss_db.resize(k);
      db.aoa_deg.resize(k);
      for (int r = 0; r < k; ++r) {
        const Point2 rp = data_.scenario.rp(r);
        const std::initializer_list<std::uint64_t> coords{static_cast<std::uint64_t>(a),
                                                          static_cast<std::uint64_t>(r)};
        const double nominal = nominal_aoa_deg(ap, rp);
        const auto stats = make_channel_stats(beta_linear(a, rp, rp_shadow_.back()(r)), nominal, model_);
        auto sig = make_stream(seed, StreamTag::kRpSignal, coords);
        const auto blocks = sample_received_signal(stats, model_, cfg_.rss_samples, sig);
        db.rss_db(r) = estimate_rss_db(blocks, cfg_.tx_power_mw);
        auto arng = make_stream(seed, StreamTag::kOfflineAoa, coords);
        db.aoa_deg(r) = offline_aoa_deg(ap, rp, cfg_.offline_aoa_noise_deg, arng);
      }
      data_.fingerprints.push_back(std::move(db));
    }
  }

  void build_online() {
    const std::uint64_t seed = setup_seed();
    const int l = data_.scenario.num_aps();
    std::optional<MusicEstimator> music;
    if (mode_ == AoaMode::kMusic)
      music.emplace(cfg_.num_antennas, cfg_.antenna_spacing_wavelengths, grid_step_);
    data_.observations.assign(static_cast<std::size_t>(num_test_points_), {});
    for (int t = 0; t < num_test_points_; ++t) {
      const Point2 tp = data_.scenario.test_points[static_cast<std::size_t>(t)];
      auto& row = data_.observations[static_cast<std::size_t>(t)];
      for (int a = 0; a < l; ++a) {
        const std::initializer_list<std::uint64_t> coords{static_cast<std::uint64_t>(t),
                                                          static_cast<std::uint64_t>(a)};
        auto srng = make_stream(seed, StreamTag::kTestShadow, coords);
        const double shadow = sampler_->sample_test_point(rp_shadow_[static_cast<std::size_t>(a)], tp, srng);
        const Point2 ap = data_.scenario.ap_positions[static_cast<std::size_t>(a)].ground();
        const double nominal = nominal_aoa_deg(ap, tp);
        const double beta = beta_linear(a, tp, shadow);
        const auto stats = make_channel_stats(beta, nominal, model_);
        auto sig = make_stream(seed, StreamTag::kTestSignal, coords);
        const auto blocks = sample_received_signal(stats, model_, cfg_.rss_samples, sig);
        TestObservation o;
        o.ap_index = a;
        o.rss_db = estimate_rss_db(blocks, cfg_.tx_power_mw);
        auto arng = make_stream(seed, StreamTag::kTestAoa, coords);
        switch (mode_) {
          case AoaMode::kMusic: {
            const auto r = music->estimate(blocks);
            ++data_.music_estimates;
            if (r.degenerate) ++data_.degenerate_spectra;
            o.aoa_deg = resolve_ula_ambiguity(r.aoa_deg, nominal);
            break;
          }
          case AoaMode::kCrb: {
            const auto crb = crb_aoa_variance(CrbConfig::from(model_, beta, nominal, cfg_.rss_samples));
            o.aoa_deg = crb_noised_aoa(nominal, crb.var_deg2, arng);
            break;
          }
          case AoaMode::kGeometric:
            o.aoa_deg = offline_aoa_deg(ap, tp, cfg_.offline_aoa_noise_deg, arng);
            break;
        }
        row.push_back(o);
      }
    }
  }

  SetupData run(int num_test_points, AoaMode mode, double grid_step) {
    num_test_points_ = num_test_points;
    mode_ = mode;
    grid_step_ = grid_step;
    build_offline();
    build_online();
    return std::move(data_);
  }

 private:
  ScenarioConfig cfg_;
  long setup_;
  ArrayModel model_;
  int num_test_points_ = 0;
  AoaMode mode_ = AoaMode::kMusic;
  double grid_step_ = 0.05;
  std::optional<ShadowSampler> sampler_;
  std::vector<Eigen::VectorXd> rp_shadow_;
  SetupData data_;
};

/// Everything one (sweep point, setup) cell produces.
struct CellOutput {
  std::vector<TrialRecord> trials;
  std::vector<double> runtime;  // per method
  std::vector<Failure> failures;
  std::vector<ModelDiagnostics> diagnostics;
  long degenerate = 0;
  long music = 0;
};

class Cell {
 public:
  Cell(const ExperimentSpec& spec, const std::vector<Method>& methods, std::size_t sweep_index, long setup)
      : spec_(spec), methods_(methods), label_(spec.sweep_label(sweep_index)), setup_(setup) {
    double sweep_value = spec.sweep_values.empty() ? 0.0 : spec.sweep_values[sweep_index];
    cfg_ = spec.config_for(sweep_value, zscore_);
  }

  CellOutput run() {
    out_.runtime.assign(methods_.size(), 0.0);
    const long total_rows = static_cast<long>(spec_.num_test_points);
    try {
      data_ = simulate_setup(cfg_, setup_, spec_.num_test_points, spec_.aoa_mode, spec_.music_grid_step_deg);
      out_.music = data_.music_estimates;
      out_.degenerate = data_.degenerate_spectra;
    } catch (const std::exception& e) {
      out_.failures.push_back({label_, setup_, "*", e.what(), total_rows * static_cast<long>(methods_.size())});
      return std::move(out_);
    }

    // Rows are collected per method and interleaved afterwards so a failed
    // method drops only its own rows.
    std::vector<std::vector<TrialRecord>> rows(methods_.size());
    std::vector<bool> failed(methods_.size(), false);

    if (needs(methods_, Kind::kDistGpr)) run_dist_gpr(rows, failed);
    for (std::size_t m = 0; m < methods_.size(); ++m) {
      if (methods_[m].kind == Kind::kDistGpr) continue;
      const auto t0 = Clock::now();
      try {
        rows[m] = run_baseline(methods_[m]);
      } catch (const std::exception& e) {
        fail(m, e.what(), rows, failed);
      }
      out_.runtime[m] += seconds_since(t0);
    }

    for (int t = 0; t < spec_.num_test_points; ++t) {
      for (std::size_t m = 0; m < methods_.size(); ++m) {
        if (failed[m]) continue;
        out_.trials.push_back(std::move(rows[m][static_cast<std::size_t>(t)]));
      }
    }
    return std::move(out_);
  }

 private:
  void fail(std::size_t m, const std::string& what, std::vector<std::vector<TrialRecord>>& rows,
            std::vector<bool>& failed) {
    failed[m] = true;
    rows[m].clear();
    out_.failures.push_back({label_, setup_, methods_[m].name, what, static_cast<long>(spec_.num_test_points)});
  }

  void record_diag(const std::string& model, const PositionGpr& g) {
    out_.diagnostics.push_back({label_, setup_, model, 'x', g.x.hyper(), g.x.diagnostics()});
    out_.diagnostics.push_back({label_, setup_, model, 'y', g.y.hyper(), g.y.diagnostics()});
  }

  TrialRecord record(int t, const std::string& method, const PositionEstimate& e) const {
    return make_trial_record(setup_, t, method, scenario_.test_points[static_cast<std::size_t>(t)], e);
  }

  void run_dist_gpr(std::vector<std::vector<TrialRecord>>& rows, std::vector<bool>& failed) {
    std::vector<std::size_t> idx;
    for (std::size_t m = 0; m < methods_.size(); ++m)
      if (methods_[m].kind == Kind::kDistGpr) idx.push_back(m);

    const auto t0 = Clock::now();
    std::vector<std::vector<PositionEstimate>> per_ap(static_cast<std::size_t>(spec_.num_test_points));
    try {
      for (const auto& db : dbs_) {
        const auto gpr = fit_position_gpr(db.hybrid(), db.rp_positions, spec_.train);
        record_diag("ap" + std::to_string(db.ap_index), gpr);
        for (int t = 0; t < spec_.num_test_points; ++t) {
          auto e = gpr.predict(hybrid_input(obs_[static_cast<std::size_t>(t)][static_cast<std::size_t>(db.ap_index)]));
          e.source = std::to_string(db.ap_index);
          per_ap[static_cast<std::size_t>(t)].push_back(std::move(e));
        }
      }
    } catch (const std::exception& e) {
      for (auto m : idx) fail(m, e.what(), rows, failed);
      return;
    }
    const double shared = seconds_since(t0);

    for (auto m : idx) {
      const auto t1 = Clock::now();
      try {
        for (int t = 0; t < spec_.num_test_points; ++t) {
          const auto r = fuse(methods_[m].fusion, per_ap[static_cast<std::size_t>(t)], zscore_);
          rows[m].push_back(record(t, methods_[m].name, r.estimate));
        }
      } catch (const std::exception& e) {
        fail(m, e.what(), rows, failed);
      }
      out_.runtime[m] += shared + seconds_since(t1);
    }
  }

  std::vector<TrialRecord> run_baseline(const Method& method) {
    std::vector<TrialRecord> rows;
    const auto n = static_cast<std::size_t>(spec_.num_test_points);
    auto central = [&](CentralVariant v) {
      const auto db = build_central_db(dbs_, v);
      const auto gpr = fit_centralized_gpr(db, spec_.train);
      record_diag(method.name, gpr);
      for (std::size_t t = 0; t < n; ++t)
        rows.push_back(record(static_cast<int>(t), method.name, gpr.predict(central_test_input(obs_[t], v))));
    };
    auto central_reg = [&](const auto& reg) {
      for (std::size_t t = 0; t < n; ++t)
        rows.push_back(record(static_cast<int>(t), method.name,
                              reg.predict(central_test_input(obs_[t], CentralVariant::kHybrid))));
    };
    auto distributed = [&](auto make) {
      std::vector<decltype(make(dbs_.front()))> regs;
      for (const auto& db : dbs_) regs.push_back(make(db));
      for (std::size_t t = 0; t < n; ++t) {
        std::vector<PositionEstimate> est;
        for (std::size_t a = 0; a < regs.size(); ++a) est.push_back(regs[a].predict(hybrid_input(obs_[t][a])));
        rows.push_back(record(static_cast<int>(t), method.name, fuse_median(est).estimate));
      }
    };

    switch (method.kind) {
      case Kind::kCentHybrid:
        central(CentralVariant::kHybrid);
        break;
      case Kind::kCentRss:
        central(CentralVariant::kRss);
        break;
      case Kind::kCentAoa:
        central(CentralVariant::kAoa);
        break;
      case Kind::kCentKnn: {
        const auto db = build_central_db(dbs_, CentralVariant::kHybrid);
        central_reg(KnnRegressor(db.inputs, db.rp_positions));
        break;
      }
      case Kind::kCentLr: {
        const auto db = build_central_db(dbs_, CentralVariant::kHybrid);
        central_reg(LinearRegressor(db.inputs, db.rp_positions));
        break;
      }
      case Kind::kDistKnn:
        distributed([](const FingerprintDB& db) { return KnnRegressor(db.hybrid(), db.rp_positions); });
        break;
      case Kind::kDistLr:
        distributed([](const FingerprintDB& db) { return LinearRegressor(db.hybrid(), db.rp_positions); });
        break;
      case Kind::kDistGpr:
        break;
    }
    return rows;
  }

  const ExperimentSpec& spec_;
  const std::vector<Method>& methods_;
  std::string label_;
  long setup_;
  ScenarioConfig cfg_;
  double zscore_ = kDefaultZScoreThreshold;
  SetupData data_;
  const Scenario& scenario_ = data_.scenario;
  const std::vector<FingerprintDB>& dbs_ = data_.fingerprints;
  const std::vector<std::vector<TestObservation>>& obs_ = data_.observations;
  CellOutput out_;
};

std::vector<double> parse_number_list(const nlohmann::json& v, const std::string& field) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(field, "expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError(field, "malformed number '" + item + "'");
      }
    }
    return out;
  }
  throw ConfigError(field, "expected an array or a comma-separated string");
}

std::vector<std::string> parse_string_list(const nlohmann::json& v, const std::string& field) {
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_string()) throw ConfigError(field, "expected strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  }
  throw ConfigError(field, "expected an array or a comma-separated string");
}

template <typename T>
T get_as(const nlohmann::json& v, const std::string& field) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field, "wrong value type");
  }
}

std::string scalar_text(const nlohmann::json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return detail::fmt_real(v.get<double>());
  throw ConfigError(field, "expected a number or string");
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

std::string_view to_string(AoaMode m) {
  switch (m) {
    case AoaMode::kMusic:
      return "music";
    case AoaMode::kCrb:
      return "crb";
    case AoaMode::kGeometric:
      return "geometric";
  }
  return "unknown";
}

AoaMode parse_aoa_mode(std::string_view name) {
  if (name == "music") return AoaMode::kMusic;
  if (name == "crb") return AoaMode::kCrb;
  if (name == "geometric") return AoaMode::kGeometric;
  throw ConfigError("aoa_mode", "unknown mode '" + std::string(name) + "'");
}

std::vector<std::string> expand_methods(const std::vector<std::string>& tags) {
  std::vector<std::string> out;
  auto add = [&](const std::string& m) {
    if (std::find(out.begin(), out.end(), m) != out.end())
      throw ConfigError("methods", "duplicate algorithm tag '" + m + "'");
    out.push_back(m);
  };
  for (const auto& t : tags) {
    if (t == "dist_gpr") {
      for (auto f : kFusions) add("dist_gpr-" + std::string(to_string(f)));
    } else {
      parse_method(t);
      add(t);
    }
  }
  return out;
}

bool is_sweep_axis(const std::string& axis) {
  return axis == "N" || axis == "K" || axis == "L" || axis == "shadow_sigma_db" || axis == "zscore_threshold";
}

ScenarioConfig ExperimentSpec::config_for(double value, double& z) const {
  ScenarioConfig c = base;
  z = zscore_threshold;
  if (sweep_axis == "N") {
    c.num_antennas = static_cast<int>(value);
  } else if (sweep_axis == "K") {
    c.num_rps = static_cast<int>(value);
  } else if (sweep_axis == "L") {
    c.num_aps = static_cast<int>(value);
  } else if (sweep_axis == "shadow_sigma_db") {
    c.shadow_sigma_db = value;
  } else if (sweep_axis == "zscore_threshold") {
    z = value;
  }
  return c;
}

std::string ExperimentSpec::sweep_label(std::size_t i) const {
  if (sweep_axis.empty()) return "all";
  return detail::fmt_real(sweep_values.at(i));
}

void ExperimentSpec::validate() const {
  base.validate();
  if (num_setups < 1) throw ConfigError("num_setups", "must be at least 1");
  if (num_test_points < 1) throw ConfigError("num_test_points", "must be at least 1");
  if (methods.empty()) throw ConfigError("methods", "must not be empty");
  expand_methods(methods);
  if (!(zscore_threshold > 0.0)) throw ConfigError("zscore_threshold", "must be positive");
  if (!(music_grid_step_deg > 0.0) || music_grid_step_deg >= 90.0)
    throw ConfigError("music_grid_step_deg", "must be in (0, 90)");
  if (threads < 1) throw ConfigError("threads", "must be at least 1");
  if (sweep_axis.empty()) {
    if (!sweep_values.empty()) throw ConfigError("sweep_values", "given without sweep_axis");
    return;
  }
  if (!is_sweep_axis(sweep_axis)) throw ConfigError("sweep_axis", "unknown axis '" + sweep_axis + "'");
  if (sweep_values.empty()) throw ConfigError("sweep_values", "must not be empty");
  for (double v : sweep_values) {
    if ((sweep_axis == "N" || sweep_axis == "K" || sweep_axis == "L") && !is_integer(v))
      throw ConfigError("sweep_values", "axis " + sweep_axis + " needs integer values");
    double z = 0.0;
    const ScenarioConfig c = config_for(v, z);
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sweep_values", std::string("value ") + detail::fmt_real(v) + " is invalid: " + e.what());
    }
    if (!(z > 0.0)) throw ConfigError("sweep_values", "z-score threshold must be positive");
  }
  for (std::size_t i = 0; i < sweep_values.size(); ++i)
    for (std::size_t j = i + 1; j < sweep_values.size(); ++j)
      if (sweep_values[i] == sweep_values[j]) throw ConfigError("sweep_values", "duplicate value");
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  ExperimentSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "sweep_axis") {
      spec.sweep_axis = get_as<std::string>(value, key);
    } else if (key == "sweep_values") {
      spec.sweep_values = parse_number_list(value, key);
    } else if (key == "num_setups") {
      spec.num_setups = get_as<int>(value, key);
    } else if (key == "num_test_points") {
      spec.num_test_points = get_as<int>(value, key);
    } else if (key == "methods") {
      spec.methods = parse_string_list(value, key);
    } else if (key == "aoa_mode") {
      spec.aoa_mode = parse_aoa_mode(get_as<std::string>(value, key));
    } else if (key == "zscore_threshold") {
      spec.zscore_threshold = get_as<double>(value, key);
    } else if (key == "music_grid_step_deg") {
      spec.music_grid_step_deg = get_as<double>(value, key);
    } else if (key == "output_dir") {
      spec.output_dir = get_as<std::string>(value, key);
    } else if (key == "threads") {
      spec.threads = get_as<int>(value, key);
    } else if (key == "gpr_learning_rate") {
      spec.train.learning_rate = get_as<double>(value, key);
    } else if (key == "gpr_max_iters") {
      spec.train.max_iters = get_as<int>(value, key);
    } else if (key == "gpr_grad_tol") {
      spec.train.grad_tol = get_as<double>(value, key);
    } else if (!set_config_value(spec.base, key, scalar_text(value, key))) {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_spec(ss.str());
}

std::uint64_t setup_seed(std::uint64_t master_seed, long setup_id) {
  return derive_seed(master_seed, StreamTag::kScenario, {static_cast<std::uint64_t>(setup_id)});
}

SetupData simulate_setup(const ScenarioConfig& cfg, long setup_id, int num_test_points, AoaMode mode,
                         double music_grid_step_deg) {
  if (num_test_points < 0) throw DomainError("negative test point count");
  return SetupSimulator(cfg, setup_id).run(num_test_points, mode, music_grid_step_deg);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.methods = expand_methods(spec.methods);
  const auto methods = parse_methods(result.methods);

  const std::size_t sweeps = spec.num_sweep_points();
  const auto setups = static_cast<std::size_t>(spec.num_setups);
  std::vector<CellOutput> cells(sweeps * setups);
  std::vector<double> cell_time(cells.size(), 0.0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto t0 = Clock::now();
      cells[i] = Cell(spec, methods, i / setups, static_cast<long>(i % setups)).run();
      cell_time[i] = seconds_since(t0);
    }
  };
  const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(spec.threads), cells.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t s = 0; s < sweeps; ++s) {
    SweepResult sweep;
    sweep.label = spec.sweep_label(s);
    sweep.method_runtime_s.assign(methods.size(), 0.0);
    for (std::size_t k = 0; k < setups; ++k) {
      auto& cell = cells[s * setups + k];
      sweep.wall_time_s += cell_time[s * setups + k];
      for (auto& r : cell.trials) sweep.trials.push_back(std::move(r));
      for (std::size_t m = 0; m < methods.size(); ++m) sweep.method_runtime_s[m] += cell.runtime[m];
      for (auto& f : cell.failures) result.failures.push_back(std::move(f));
      for (auto& d : cell.diagnostics) result.diagnostics.push_back(std::move(d));
      result.degenerate_spectra += cell.degenerate;
      result.music_estimates += cell.music;
    }
    result.sweeps.push_back(std::move(sweep));
  }
  return result;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability outside [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials, const std::string& sweep_value) {
  std::vector<std::string> order;
  std::vector<std::vector<const TrialRecord*>> groups;
  for (const auto& r : trials) {
    auto it = std::find(order.begin(), order.end(), r.method);
    if (it == order.end()) {
      order.push_back(r.method);
      groups.emplace_back();
      it = order.end() - 1;
    }
    groups[static_cast<std::size_t>(it - order.begin())].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (std::size_t g = 0; g < order.size(); ++g) {
    SummaryRow row;
    row.sweep_value = sweep_value;
    row.method = order[g];
    row.n = groups[g].size();
    std::vector<double> errs;
    double area = 0.0;
    std::size_t covered = 0;
    for (const auto* r : groups[g]) {
      errs.push_back(r->err_m);
      area += r->ellipse_area_m2;
      covered += r->covered ? 1 : 0;
    }
    const double n = static_cast<double>(row.n);
    row.mean_err_m = std::accumulate(errs.begin(), errs.end(), 0.0) / n;
    row.mean_ellipse_area_m2 = area / n;
    row.coverage_pct = 100.0 * static_cast<double>(covered) / n;
    std::sort(errs.begin(), errs.end());
    for (std::size_t q = 0; q < row.err_quantiles.size(); ++q)
      row.err_quantiles[q] = quantile_sorted(errs, 0.1 * static_cast<double>(q + 1));
    row.runtime_s = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  std::vector<SummaryRow> out;
  for (const auto& sweep : result.sweeps) {
    auto rows = summarize(sweep.trials, sweep.label);
    for (auto& row : rows) {
      const auto it = std::find(result.methods.begin(), result.methods.end(), row.method);
      if (it != result.methods.end())
        row.runtime_s = sweep.method_runtime_s[static_cast<std::size_t>(it - result.methods.begin())];
      out.push_back(std::move(row));
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "sweep_value,method,n,mean_err_m,mean_ellipse_area_m2,coverage_pct,"
         "p10,p20,p30,p40,p50,p60,p70,p80,p90,runtime_s\n";
  using detail::fmt_real;
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{}", r.sweep_value, r.method, r.n, fmt_real(r.mean_err_m),
                       fmt_real(r.mean_ellipse_area_m2), fmt_real(r.coverage_pct));
    for (double q : r.err_quantiles) out << ',' << fmt_real(q);
    out << ',' << fmt_real(r.runtime_s) << '\n';
  }
}

std::string trial_file_name(const ExperimentSpec& spec, std::size_t i) {
  if (spec.sweep_axis.empty()) return "trials.csv";
  return "trials_" + spec.sweep_axis + "_" + spec.sweep_label(i) + ".csv";
}

std::string report_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  using nlohmann::json;
  json j;
  j["master_seed"] = spec.base.seed;
  json seeds = json::array();
  for (int s = 0; s < spec.num_setups; ++s)
    seeds.push_back({{"setup_id", s},
                     {"seed", setup_seed(spec.base.seed, s)}});
  j["setup_seeds"] = seeds;
  j["config"] = detail::to_json(spec.base);
  j["experiment"] = {{"sweep_axis", spec.sweep_axis},
                     {"sweep_values", spec.sweep_values},
                     {"num_setups", spec.num_setups},
                     {"num_test_points", spec.num_test_points},
                     {"methods", result.methods},
                     {"aoa_mode", std::string(to_string(spec.aoa_mode))},
                     {"zscore_threshold", spec.zscore_threshold},
                     {"music_grid_step_deg", spec.music_grid_step_deg},
                     {"threads", spec.threads}};
  json sweeps = json::array();
  for (const auto& s : result.sweeps)
    sweeps.push_back({{"sweep_value", s.label}, {"rows", s.trials.size()}, {"cpu_time_s", s.wall_time_s}});
  j["sweeps"] = sweeps;
  j["music_estimates"] = result.music_estimates;
  j["degenerate_spectra"] = result.degenerate_spectra;
  json diags = json::array();
  for (const auto& d : result.diagnostics) {
    diags.push_back({{"sweep_value", d.sweep_value},
                     {"setup_id", d.setup_id},
                     {"model", d.model},
                     {"coordinate", std::string(1, d.coordinate)},
                     {"signal_var", d.hyper.signal_var},
                     {"length_scale", d.hyper.length_scale},
                     {"noise_var", d.hyper.noise_var},
                     {"iterations", d.train.iterations},
                     {"initial_lml", d.train.initial_lml},
                     {"final_lml", d.train.final_lml},
                     {"grad_norm", d.train.grad_norm},
                     {"jitter", d.train.jitter},
                     {"converged", d.train.converged},
                     {"stop_reason", d.train.stop_reason}});
  }
  j["gpr_diagnostics"] = diags;
  json fails = json::array();
  for (const auto& f : result.failures)
    fails.push_back({{"sweep_value", f.sweep_value},
                     {"setup_id", f.setup_id},
                     {"method", f.method},
                     {"message", f.message},
                     {"rows_lost", f.rows_lost}});
  j["failures"] = fails;
  return j.dump(2) + "\n";
}

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(spec.output_dir);
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  for (std::size_t i = 0; i < result.sweeps.size(); ++i) {
    auto f = open(trial_file_name(spec, i));
    write_trial_header(f);
    for (const auto& r : result.sweeps[i].trials) write_trial_row(f, r);
  }
  {
    auto f = open("summary.csv");
    write_summary_csv(f, summarize(result));
  }
  auto f = open("report.json");
  f << report_json(spec, result);
}

}  // namespace cfloc
