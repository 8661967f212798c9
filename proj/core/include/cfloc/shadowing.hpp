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

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "cfloc/geometry.hpp"
#include "cfloc/rng.hpp"
#include "cfloc/scenario.hpp"

namespace cfloc {

/// Shadowing realisations in dB, one column per AP. Rows 0..K-1 are the RPs
/// and the last row is the test point.
struct ShadowField {
  Eigen::MatrixXd values_db;

  double rp(int k, int ap) const { return values_db(k, ap); }
  double test_point(int ap) const { return values_db(values_db.rows() - 1, ap); }
};

/// Same-AP covariance sigma^2 * 2^(-d / d_corr) over the given locations.
Eigen::MatrixXd shadow_covariance(const std::vector<Point2>& locations, double sigma_db, double decorr_dist_m);

/// One joint draw over the K RPs plus `test_point`, independent across APs.
ShadowField sample_shadow_field(const Scenario& scenario, const Point2& test_point, Rng& rng);

/// Samples the RP shadowing of a setup once and then draws each test
/// point's value conditionally on it, which is equivalent to a joint draw
/// over (RPs, test point) but factorises the K x K covariance only once.
class ShadowSampler {
 public:
  explicit ShadowSampler(const Scenario& scenario);

  /// K-vector of RP shadowing for one AP.
  Eigen::VectorXd sample_rps(Rng& rng) const;

  /// Test-point shadowing for one AP given that AP's RP draw.
  double sample_test_point(const Eigen::VectorXd& rp_values_db, const Point2& test_point, Rng& rng) const;

  double sigma_db() const { return sigma_; }

 private:
  std::vector<Point2> rps_;
  double sigma_;
  double decorr_;
  Eigen::MatrixXd chol_;  // lower factor of the RP covariance
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace cfloc
