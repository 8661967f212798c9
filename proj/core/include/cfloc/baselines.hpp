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

#include <span>
#include <string_view>

#include <Eigen/Core>

#include "cfloc/estimate.hpp"
#include "cfloc/fingerprint.hpp"
#include "cfloc/fusion.hpp"
#include "cfloc/gpr.hpp"

namespace cfloc {

/// Which fingerprint features the CPU-side models see.
enum class CentralVariant { kHybrid, kRss, kAoa };

std::string_view to_string(CentralVariant v);

/// Fingerprints of all APs stacked per RP. Hybrid column order is
/// [rss_1 .. rss_L, aoa_1 .. aoa_L].
struct CentralFingerprintDB {
  Eigen::MatrixXd inputs;        // K x D
  Eigen::MatrixX2d rp_positions;  // K x 2
  CentralVariant variant = CentralVariant::kHybrid;
};

/// Throws DomainError if the per-AP databases disagree in size or RP layout.
CentralFingerprintDB build_central_db(std::span<const FingerprintDB> per_ap, CentralVariant variant);

/// Online counterpart of build_central_db for one test point.
Eigen::RowVectorXd central_test_input(std::span<const TestObservation> obs, CentralVariant variant);

/// Online hybrid input [rss, aoa] of a single AP.
Eigen::RowVectorXd hybrid_input(const TestObservation& obs);

/// Independent GPs for the x and y coordinate.
struct PositionGpr {
  GprModel x;
  GprModel y;

  PositionEstimate predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const;
};

PositionGpr fit_position_gpr(const Eigen::MatrixXd& inputs, const Eigen::MatrixX2d& targets,
                             const TrainConfig& config = {});

PositionGpr fit_centralized_gpr(const CentralFingerprintDB& db, const TrainConfig& config = {});

enum class KnnWeighting { kInverseDistance, kUniform };

/// Inverse-distance-weighted (by default) k nearest neighbours in z-scored input space.
/// A neighbour at distance zero takes all the weight (shared equally among
/// exact matches). The reported variance is the weighted spread of the
/// neighbours' coordinates, floored.
class KnnRegressor {
 public:
  static constexpr int kDefaultK = 4;

  KnnRegressor(const Eigen::MatrixXd& inputs, const Eigen::MatrixX2d& targets, int k = kDefaultK,
               KnnWeighting weighting = KnnWeighting::kInverseDistance, double var_floor = 1e-9);

  PositionEstimate predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const;

  /// Indices of the k nearest training rows, nearest first (ties by index).
  std::vector<int> neighbours(const Eigen::Ref<const Eigen::RowVectorXd>& input) const;

 private:
  InputScaler scaler_;
  Eigen::MatrixXd inputs_;  // scaled
  Eigen::MatrixX2d targets_;
  int k_;
  KnnWeighting weighting_;
  double var_floor_;
};

/// Ordinary least squares with intercept per coordinate. A rank-deficient
/// design falls back to ridge with penalty 1e-8 trace(X^T X). The reported
/// variance is the residual mean square, floored.
class LinearRegressor {
 public:
  LinearRegressor(const Eigen::MatrixXd& inputs, const Eigen::MatrixX2d& targets, double var_floor = 1e-9);

  PositionEstimate predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const;

  const Eigen::MatrixX2d& coefficients() const { return coef_; }  // (D+1) x 2, intercept first
  bool used_ridge() const { return ridge_; }

 private:
  Eigen::MatrixX2d coef_;
  double var_x_ = 0.0;
  double var_y_ = 0.0;
  bool ridge_ = false;
};

enum class Regressor { kKnn, kLr };

/// Fits the regressor on each AP's hybrid fingerprints, predicts from that
/// AP's observation and fuses the AP outputs with the median rule.
FusionResult distributed_median_with(Regressor regressor, std::span<const FingerprintDB> per_ap,
                                     std::span<const TestObservation> obs);

}  // namespace cfloc
