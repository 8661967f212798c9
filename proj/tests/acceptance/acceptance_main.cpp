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

// Runs every acceptance criterion and prints one PASS/FAIL line for each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/LU>
#include <fmt/core.h>

#include "cfloc/channel.hpp"
#include "cfloc/crb.hpp"
#include "cfloc/experiment.hpp"
#include "cfloc/fingerprint.hpp"
#include "cfloc/fusion.hpp"
#include "cfloc/gpr.hpp"
#include "cfloc/metrics.hpp"

using namespace cfloc;

namespace {

constexpr double kPiValue = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double sq_exp(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, const Hyperparams& h) {
  return h.signal_var * std::exp(-(a - b).squaredNorm() / (2.0 * h.length_scale));
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const Hyperparams& h) {
  Eigen::MatrixXd k(x.rows(), x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.rows(); ++j) k(i, j) = sq_exp(x.row(i), x.row(j), h);
  return k;
}

Hyperparams random_hyper(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Hyperparams h;
  h.signal_var = std::exp(u(rng));
  h.length_scale = std::exp(u(rng));
  h.noise_var = std::exp(-2.0 + u(rng));
  return h;
}

Outcome gpr_oracle() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kd(1, 8), dd(1, 4);
  std::normal_distribution<double> n01;
  GprOptions raw;
  raw.standardize_inputs = false;
  raw.center_targets = false;
  raw.var_floor = 0.0;
  double worst = 0.0;
  for (int p = 0; p < 50; ++p) {
    const int k = kd(rng), d = dd(rng);
    Eigen::MatrixXd x(k, d);
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < d; ++j) x(i, j) = n01(rng);
      y(i) = n01(rng);
    }
    const Hyperparams h = random_hyper(rng);
    const Eigen::MatrixXd kinv =
        (gram(x, h) + h.noise_var * Eigen::MatrixXd::Identity(k, k)).fullPivLu().inverse();
    const GprModel model = GprModel::condition(x, y, h, raw);
    for (int q = 0; q < 5; ++q) {
      Eigen::RowVectorXd xs(d);
      for (int j = 0; j < d; ++j) xs(j) = n01(rng);
      Eigen::VectorXd ks(k);
      for (int i = 0; i < k; ++i) ks(i) = sq_exp(x.row(i), xs, h);
      const double mean = ks.dot(kinv * y);
      const double var = h.signal_var - ks.dot(kinv * ks);
      const auto pred = model.predict(xs);
      worst = std::max({worst, std::abs(pred.mean - mean), std::abs(pred.var - var)});
    }
  }
  return {worst < 1e-9, fmt::format("max abs deviation {:.3g}", worst)};
}

Outcome gradient_check() {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n01;
  GprOptions raw;
  raw.standardize_inputs = false;
  raw.center_targets = false;
  double worst = 0.0;
  for (int p = 0; p < 100; ++p) {
    const int k = 8, d = 1 + p % 4;
    Eigen::MatrixXd x(k, d);
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < d; ++j) x(i, j) = n01(rng);
      y(i) = n01(rng);
    }
    const Hyperparams h = random_hyper(rng);
    const Eigen::Vector3d g = grad_log_marginal_likelihood(x, y, h, raw);
    Eigen::Vector3d fd;
    const double step = 1e-5;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d up = h.to_log(), dn = h.to_log();
      up(i) += step;
      dn(i) -= step;
      fd(i) = (log_marginal_likelihood(x, y, Hyperparams::from_log(up), raw) -
               log_marginal_likelihood(x, y, Hyperparams::from_log(dn), raw)) /
              (2.0 * step);
    }
    worst = std::max(worst, (g - fd).cwiseAbs().maxCoeff() / std::max(fd.cwiseAbs().maxCoeff(), 1e-3));
  }
  return {worst < 1e-5, fmt::format("max relative error {:.3g}", worst)};
}

Outcome fusion_algebra() {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> ld(1, 25);
  std::uniform_real_distribution<double> pos(0.0, 200.0), lv(-3.0, 6.0);
  double mean_dev = 0.0, bayes_dev = 0.0;
  long order_violations = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const int l = ld(rng);
    std::vector<PositionEstimate> es(static_cast<std::size_t>(l));
    for (auto& e : es) {
      e.mean = {pos(rng), pos(rng)};
      e.var_x = std::exp(lv(rng));
      e.var_y = std::exp(lv(rng));
    }
    double sum_v = 0.0, prec = 0.0, wmean = 0.0;
    for (const auto& e : es) {
      sum_v += e.var_x;
      prec += 1.0 / e.var_x;
      wmean += e.mean.x / e.var_x;
    }
    const double ll = static_cast<double>(l);
    const auto dm = fuse_mean(es).estimate;
    const auto db = fuse_bayesian(es).estimate;
    const auto dz = fuse_zscore(es);
    mean_dev = std::max(mean_dev, std::abs(dm.var_x - sum_v / (ll * ll)) / (sum_v / (ll * ll)));
    bayes_dev = std::max({bayes_dev, std::abs(db.var_x - 1.0 / prec) * prec,
                          std::abs(db.mean.x - wmean / prec) / std::max(1.0, std::abs(wmean / prec))});
    double kept = 0.0;
    for (int i : dz.retained_x) kept += es[static_cast<std::size_t>(i)].var_x;
    const double n = static_cast<double>(dz.retained_x.size());
    const double tol = 1.0 + 1e-12;
    if (!(db.var_x <= dz.estimate.var_x * tol && dz.estimate.var_x <= kept / (n * n) * tol)) ++order_violations;
  }
  return {mean_dev <= 1e-12 && bayes_dev <= 1e-12 && order_violations == 0,
          fmt::format("mean dev {:.2g}, bayesian dev {:.2g}, ordering violations {}", mean_dev, bayes_dev,
                      order_violations)};
}

Outcome ellipse_calibration() {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> lv(-2.0, 5.0), pos(0.0, 200.0);
  std::normal_distribution<double> n01;
  const int trials = 100000;
  int covered = 0;
  for (int t = 0; t < trials; ++t) {
    PositionEstimate e;
    e.var_x = std::exp(lv(rng));
    e.var_y = std::exp(lv(rng));
    const Point2 truth{pos(rng), pos(rng)};
    e.mean = {truth.x + std::sqrt(e.var_x) * n01(rng), truth.y + std::sqrt(e.var_y) * n01(rng)};
    covered += ellipse_covers(truth, e) ? 1 : 0;
  }
  const double pct = 100.0 * covered / trials;
  return {std::abs(pct - 95.0) <= 0.5, fmt::format("coverage {:.3f}%", pct)};
}

Outcome music_vs_crb() {
  ArrayModel m;
  m.num_antennas = 16;
  m.angular_spread_deg = 2.0;
  m.tx_power_mw = 100.0;
  m.noise_power_mw = 1.0;
  const double beta = 1.0;  // 20 dB per antenna
  const double theta = 60.0;
  const int blocks = 200;
  const double v = crb_aoa_variance(CrbConfig::from(m, beta, theta, blocks)).var_deg2;
  const MusicEstimator music(m.num_antennas, m.d_over_lambda);
  const auto stats = make_channel_stats(beta, theta, m);
  double s2 = 0.0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(7000 + t));
    const double e = music.estimate(sample_received_signal(stats, m, blocks, rng)).aoa_deg - theta;
    s2 += e * e;
  }
  const double rmse = std::sqrt(s2 / trials);
  const double sd = std::sqrt(v);
  bool monotone = true;
  double prev = INFINITY;
  std::string vs;
  for (int n : {4, 8, 16}) {
    ArrayModel mn = m;
    mn.num_antennas = n;
    const double vn = crb_aoa_variance(CrbConfig::from(mn, beta, theta, blocks)).var_deg2;
    monotone = monotone && vn < prev;
    prev = vn;
    vs += fmt::format(" {:.3g}", vn);
  }
  return {rmse <= 3.0 * sd && rmse >= sd - 0.05 && monotone,
          fmt::format("rmse {:.4f} deg, sqrt(v_crb) {:.4f} deg, v_crb(N=4,8,16):{}", rmse, sd, vs)};
}

Outcome disk_covariance_mc() {
  ArrayModel m;
  m.num_antennas = 4;
  m.angular_spread_deg = 10.0;
  const double theta = 60.0;
  const int draws = 1000000;
  const double spread = m.angular_spread_deg * kPiValue / 180.0;
  const double nominal = theta * kPiValue / 180.0;
  Rng rng(15);
  CMatrix acc = CMatrix::Zero(4, 4);
  for (int i = 0; i < draws; ++i) {
    const double t = (nominal + sample_disk_offset_rad(spread, rng)) * 180.0 / kPiValue;
    const CVector a = steering_vector(t, 4, m.d_over_lambda);
    acc += a * a.adjoint();
  }
  acc /= static_cast<double>(draws);
  const CVector a0 = steering_vector(theta, 4, m.d_over_lambda);
  const Eigen::MatrixXd g = disk_scaling_matrix(theta, 4, m.d_over_lambda, m.angular_spread_deg);
  double worst = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const std::complex<double> expect = g(r, c) * a0(r) * std::conj(a0(c));
      worst = std::max(worst, std::abs(acc(r, c) - expect) / std::abs(expect));
    }
  return {worst < 0.02, fmt::format("max entrywise relative error {:.4f}", worst)};
}

std::map<std::pair<long, long>, const TrialRecord*> index_by_trial(const std::vector<TrialRecord>& rows,
                                                                   const std::string& method) {
  std::map<std::pair<long, long>, const TrialRecord*> out;
  for (const auto& r : rows)
    if (r.method == method) out[{r.setup_id, r.test_id}] = &r;
  return out;
}

double mean_of(const std::vector<TrialRecord>& rows, const std::string& method, double TrialRecord::*field) {
  double s = 0.0;
  long n = 0;
  for (const auto& r : rows)
    if (r.method == method) {
      s += r.*field;
      ++n;
    }
  return n > 0 ? s / static_cast<double>(n) : NAN;
}

Outcome desk_ordering(const std::vector<TrialRecord>& rows) {
  const auto db = index_by_trial(rows, "dist_gpr-bayesian");
  const auto dm = index_by_trial(rows, "dist_gpr-mean");
  long violations = 0;
  for (const auto& [key, b] : db) {
    const auto it = dm.find(key);
    if (it == dm.end()) {
      ++violations;
      continue;
    }
    const double tol = 1.0 + 1e-12;
    if (b->var_x > it->second->var_x * tol || b->var_y > it->second->var_y * tol) ++violations;
  }
  const double a_dd = mean_of(rows, "dist_gpr-median", &TrialRecord::ellipse_area_m2);
  const double a_dm = mean_of(rows, "dist_gpr-mean", &TrialRecord::ellipse_area_m2);
  const double a_db = mean_of(rows, "dist_gpr-bayesian", &TrialRecord::ellipse_area_m2);
  const double a_dz = mean_of(rows, "dist_gpr-zscore", &TrialRecord::ellipse_area_m2);
  const bool pass = !db.empty() && violations == 0 && a_db <= a_dz && a_dz / a_dm >= 0.5 && a_dz / a_dm <= 2.0 &&
                    a_dd / a_dm >= 3.0;
  return {pass, fmt::format("trials {}, v_DB>v_DM {}, mean area DD {:.1f} DM {:.1f} DB {:.1f} DZ {:.1f} m^2, "
                            "DD/DM {:.2f}, DZ/DM {:.2f}",
                            db.size(), violations, a_dd, a_dm, a_db, a_dz, a_dd / a_dm, a_dz / a_dm)};
}

Outcome beats_central_rss(const std::vector<TrialRecord>& rows) {
  const auto rss = index_by_trial(rows, "cent_rss");
  const double rss_mean = mean_of(rows, "cent_rss", &TrialRecord::err_m);
  bool pass = !rss.empty();
  std::string detail = fmt::format("cent_rss {:.2f} m;", rss_mean);
  for (const std::string m : {"dist_gpr-median", "dist_gpr-mean", "dist_gpr-bayesian", "dist_gpr-zscore"}) {
    const auto ours = index_by_trial(rows, m);
    std::vector<double> diff;
    for (const auto& [key, r] : ours) {
      const auto it = rss.find(key);
      if (it != rss.end()) diff.push_back(it->second->err_m - r->err_m);
    }
    if (diff.empty() || diff.size() != rss.size()) {
      pass = false;
      detail += fmt::format(" {} unpaired;", m);
      continue;
    }
    std::mt19937_64 rng(16);
    std::uniform_int_distribution<std::size_t> pick(0, diff.size() - 1);
    const int reps = 2000;
    int positive = 0;
    for (int b = 0; b < reps; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < diff.size(); ++i) s += diff[pick(rng)];
      positive += s > 0.0 ? 1 : 0;
    }
    const double own = mean_of(rows, m, &TrialRecord::err_m);
    const double frac = static_cast<double>(positive) / reps;
    pass = pass && own < rss_mean && frac >= 0.9;
    detail += fmt::format(" {} {:.2f} m (bootstrap {:.3f});", m, own, frac);
  }
  return {pass, detail};
}

std::string trial_csv(const ExperimentResult& r) {
  std::ostringstream ss;
  write_trial_header(ss);
  for (const auto& sweep : r.sweeps)
    for (const auto& row : sweep.trials) write_trial_row(ss, row);
  return ss.str();
}

Outcome determinism(ExperimentSpec spec) {
  spec.num_setups = 2;
  spec.num_test_points = 20;
  spec.threads = 1;
  const std::string a = trial_csv(run_experiment(spec));
  const std::string b = trial_csv(run_experiment(spec));
  spec.threads = 2;
  const std::string c = trial_csv(run_experiment(spec));
  return {a == b && a == c && a.size() > 100,
          fmt::format("{} bytes; repeat {}, threads=2 {}", a.size(), a == b ? "identical" : "differs",
                      a == c ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfloc acceptance checks"};
  std::string out_dir = "acceptance_out";
  std::string config_path;
  app.add_option("--out", out_dir, "directory for the desk-scale run outputs");
  app.add_option("--config", config_path, "desk-scale experiment config")->required()->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  auto run = [&](const std::string& name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} {} ({:.1f} s): {}\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  run("gpr_oracle", gpr_oracle);
  run("gradient", gradient_check);
  run("fusion_algebra", fusion_algebra);
  run("ellipse_calibration", ellipse_calibration);
  run("music_vs_crb", music_vs_crb);
  run("disk_covariance_mc", disk_covariance_mc);

  ExperimentSpec spec = load_experiment_spec(config_path);
  spec.output_dir = out_dir;
  run("determinism", [&] { return determinism(spec); });

  ExperimentResult desk;
  double desk_secs = 0.0;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    desk = run_experiment(spec);
    desk_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::filesystem::create_directories(out_dir);
    write_experiment_outputs(spec, desk);
  } catch (const std::exception& e) {
    fmt::print("desk run failed: {}\n", e.what());
  }
  const std::vector<TrialRecord> rows = desk.sweeps.empty() ? std::vector<TrialRecord>{} : desk.sweeps[0].trials;
  run("desk_ordering", [&] {
    auto o = desk_ordering(rows);
    o.pass = o.pass && desk.failures.empty() && desk_secs < 600.0;
    o.detail += fmt::format(", failures {}, run {:.0f} s", desk.failures.size(), desk_secs);
    return o;
  });
  run("distributed_beats_central_rss", [&] { return beats_central_rss(rows); });

  fmt::print("{} of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
