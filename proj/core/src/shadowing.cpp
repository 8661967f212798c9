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

#include "cfloc/shadowing.hpp"

#include <cmath>
#include <random>

#include "cfloc/linalg.hpp"

namespace cfloc {
namespace {

constexpr double kJitterRel = 1e-10;
constexpr int kJitterEscalations = 3;

std::vector<Point2> rp_points(const Scenario& s) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(s.num_rps()));
  for (int k = 0; k < s.num_rps(); ++k) pts.push_back(s.rp(k));
  return pts;
}

Eigen::MatrixXd lower_factor(const Eigen::MatrixXd& cov, double sigma2) {
  auto f = cholesky_with_jitter(cov, kJitterRel * sigma2, kJitterEscalations);
  return f.llt.matrixL();
}

}  // namespace

Eigen::MatrixXd shadow_covariance(const std::vector<Point2>& locations, double sigma_db, double decorr_dist_m) {
  const auto n = static_cast<Eigen::Index>(locations.size());
  const double s2 = sigma_db * sigma_db;
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = s2;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = distance(locations[static_cast<std::size_t>(i)], locations[static_cast<std::size_t>(j)]);
      c(i, j) = c(j, i) = s2 * std::exp2(-d / decorr_dist_m);
    }
  }
  return c;
}

ShadowField sample_shadow_field(const Scenario& scenario, const Point2& test_point, Rng& rng) {
  const auto& cfg = scenario.config;
  auto pts = rp_points(scenario);
  pts.push_back(test_point);
  const auto n = static_cast<Eigen::Index>(pts.size());
  ShadowField field;
  field.values_db = Eigen::MatrixXd::Zero(n, scenario.num_aps());
  if (cfg.shadow_sigma_db == 0.0) return field;
  const Eigen::MatrixXd cov = shadow_covariance(pts, cfg.shadow_sigma_db, cfg.decorr_dist_m);
  const Eigen::MatrixXd l = lower_factor(cov, cfg.shadow_sigma_db * cfg.shadow_sigma_db);
  std::normal_distribution<double> normal;
  Eigen::VectorXd w(n);
  for (int ap = 0; ap < scenario.num_aps(); ++ap) {
    for (Eigen::Index i = 0; i < n; ++i) w(i) = normal(rng);
    field.values_db.col(ap) = l.triangularView<Eigen::Lower>() * w;
  }
  return field;
}

ShadowSampler::ShadowSampler(const Scenario& scenario)
    : rps_(rp_points(scenario)),
      sigma_(scenario.config.shadow_sigma_db),
      decorr_(scenario.config.decorr_dist_m) {
  if (sigma_ == 0.0) return;
  const Eigen::MatrixXd cov = shadow_covariance(rps_, sigma_, decorr_);
  auto f = cholesky_with_jitter(cov, kJitterRel * sigma_ * sigma_, kJitterEscalations);
  llt_ = f.llt;
  chol_ = llt_.matrixL();
}

Eigen::VectorXd ShadowSampler::sample_rps(Rng& rng) const {
  const auto k = static_cast<Eigen::Index>(rps_.size());
  if (sigma_ == 0.0) return Eigen::VectorXd::Zero(k);
  std::normal_distribution<double> normal;
  Eigen::VectorXd w(k);
  for (Eigen::Index i = 0; i < k; ++i) w(i) = normal(rng);
  return chol_.triangularView<Eigen::Lower>() * w;
}

double ShadowSampler::sample_test_point(const Eigen::VectorXd& rp_values_db, const Point2& tp, Rng& rng) const {
  if (sigma_ == 0.0) return 0.0;
  const double s2 = sigma_ * sigma_;
  const auto k = static_cast<Eigen::Index>(rps_.size());
  Eigen::VectorXd c(k);
  for (Eigen::Index i = 0; i < k; ++i) c(i) = s2 * std::exp2(-distance(rps_[static_cast<std::size_t>(i)], tp) / decorr_);
  const Eigen::VectorXd alpha = llt_.solve(c);
  const double mean = alpha.dot(rp_values_db);
  const double var = std::max(0.0, s2 - c.dot(alpha));
  std::normal_distribution<double> normal;
  return mean + std::sqrt(var) * normal(rng);
}

}  // namespace cfloc
