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

#include "cfloc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/QR>

#include "cfloc/errors.hpp"

namespace cfloc {

std::string_view to_string(CentralVariant v) {
  switch (v) {
    case CentralVariant::kHybrid:
      return "hybrid";
    case CentralVariant::kRss:
      return "rss";
    case CentralVariant::kAoa:
      return "aoa";
  }
  return "unknown";
}

CentralFingerprintDB build_central_db(std::span<const FingerprintDB> per_ap, CentralVariant variant) {
  if (per_ap.empty()) throw DomainError("central database needs at least one AP");
  const Eigen::Index k = per_ap.front().size();
  const auto l = static_cast<Eigen::Index>(per_ap.size());
  for (const auto& db : per_ap) {
    if (db.size() != k || db.rp_positions.rows() != k) throw DomainError("AP databases differ in RP count");
    if (k > 0 && (db.rp_positions - per_ap.front().rp_positions).cwiseAbs().maxCoeff() > 0.0)
      throw DomainError("AP databases use different RP layouts");
  }
  CentralFingerprintDB out;
  out.variant = variant;
  out.rp_positions = per_ap.front().rp_positions;
  const Eigen::Index d = variant == CentralVariant::kHybrid ? 2 * l : l;
  out.inputs.resize(k, d);
  for (Eigen::Index a = 0; a < l; ++a) {
    const auto& db = per_ap[static_cast<std::size_t>(a)];
    switch (variant) {
      case CentralVariant::kHybrid:
        out.inputs.col(a) = db.rss_db;
        out.inputs.col(l + a) = db.aoa_deg;
        break;
      case CentralVariant::kRss:
        out.inputs.col(a) = db.rss_db;
        break;
      case CentralVariant::kAoa:
        out.inputs.col(a) = db.aoa_deg;
        break;
    }
  }
  return out;
}

Eigen::RowVectorXd central_test_input(std::span<const TestObservation> obs, CentralVariant variant) {
  const auto l = static_cast<Eigen::Index>(obs.size());
  Eigen::RowVectorXd row(variant == CentralVariant::kHybrid ? 2 * l : l);
  for (Eigen::Index a = 0; a < l; ++a) {
    const auto& o = obs[static_cast<std::size_t>(a)];
    switch (variant) {
      case CentralVariant::kHybrid:
        row(a) = o.rss_db;
        row(l + a) = o.aoa_deg;
        break;
      case CentralVariant::kRss:
        row(a) = o.rss_db;
        break;
      case CentralVariant::kAoa:
        row(a) = o.aoa_deg;
        break;
    }
  }
  return row;
}

Eigen::RowVectorXd hybrid_input(const TestObservation& obs) {
  Eigen::RowVectorXd row(2);
  row << obs.rss_db, obs.aoa_deg;
  return row;
}

PositionEstimate PositionGpr::predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const {
  const auto px = x.predict(input);
  const auto py = y.predict(input);
  PositionEstimate e;
  e.mean = {px.mean, py.mean};
  e.var_x = px.var;
  e.var_y = py.var;
  return e;
}

PositionGpr fit_position_gpr(const Eigen::MatrixXd& inputs, const Eigen::MatrixX2d& targets,
                             const TrainConfig& config) {
  return {fit(inputs, targets.col(0), config), fit(inputs, targets.col(1), config)};
}

PositionGpr fit_centralized_gpr(const CentralFingerprintDB& db, const TrainConfig& config) {
  return fit_position_gpr(db.inputs, db.rp_positions, config);
}

KnnRegressor::KnnRegressor(const Eigen::MatrixXd& inputs, const Eigen::MatrixX2d& targets, int k,
                           KnnWeighting weighting, double var_floor)
    : scaler_(InputScaler::fit(inputs)),
      inputs_(scaler_.transform(inputs)),
      targets_(targets),
      k_(k),
      weighting_(weighting),
      var_floor_(var_floor) {
  if (k < 1) throw DomainError("KNN: k must be positive");
  if (inputs.rows() < k) throw DomainError("KNN: fewer training rows than k");
  if (targets.rows() != inputs.rows()) throw DomainError("KNN: inputs and targets differ in length");
}

std::vector<int> KnnRegressor::neighbours(const Eigen::Ref<const Eigen::RowVectorXd>& input) const {
  const Eigen::RowVectorXd z = scaler_.transform_row(input);
  const Eigen::VectorXd d2 = (inputs_.rowwise() - z).rowwise().squaredNorm();
  std::vector<int> idx(static_cast<std::size_t>(d2.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + k_, idx.end(), [&](int a, int b) {
    return d2(a) < d2(b) || (d2(a) == d2(b) && a < b);
  });
  idx.resize(static_cast<std::size_t>(k_));
  return idx;
}

PositionEstimate KnnRegressor::predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const {
  const Eigen::RowVectorXd z = scaler_.transform_row(input);
  const auto nn = neighbours(input);
  std::vector<double> w(nn.size());
  bool exact = false;
  for (std::size_t i = 0; i < nn.size(); ++i) {
    const double d = (inputs_.row(nn[i]) - z).norm();
    if (d == 0.0) exact = true;
    w[i] = d;
  }
  for (auto& wi : w) {
    if (weighting_ == KnnWeighting::kUniform)
      wi = 1.0;
    else
      wi = exact ? (wi == 0.0 ? 1.0 : 0.0) : 1.0 / wi;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  PositionEstimate e;
  for (std::size_t i = 0; i < nn.size(); ++i) {
    e.mean.x += w[i] / total * targets_(nn[i], 0);
    e.mean.y += w[i] / total * targets_(nn[i], 1);
  }
  double vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < nn.size(); ++i) {
    const double dx = targets_(nn[i], 0) - e.mean.x;
    const double dy = targets_(nn[i], 1) - e.mean.y;
    vx += w[i] / total * dx * dx;
    vy += w[i] / total * dy * dy;
  }
  e.var_x = std::max(vx, var_floor_);
  e.var_y = std::max(vy, var_floor_);
  return e;
}

LinearRegressor::LinearRegressor(const Eigen::MatrixXd& inputs, const Eigen::MatrixX2d& targets, double var_floor) {
  const Eigen::Index k = inputs.rows();
  const Eigen::Index p = inputs.cols() + 1;
  if (targets.rows() != k) throw DomainError("LR: inputs and targets differ in length");
  if (k <= p) throw DomainError("LR: needs more training rows than parameters");
  Eigen::MatrixXd x(k, p);
  x.col(0).setOnes();
  x.rightCols(p - 1) = inputs;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() == p) {
    coef_ = qr.solve(Eigen::MatrixXd(targets));
  } else {
    ridge_ = true;
    Eigen::MatrixXd gram = x.transpose() * x;
    const double lambda = 1e-8 * gram.trace();
    gram.diagonal().array() += lambda;
    coef_ = gram.ldlt().solve(x.transpose() * targets);
  }
  const Eigen::MatrixX2d resid = targets - x * coef_;
  const double dof = static_cast<double>(k - p);
  var_x_ = std::max(resid.col(0).squaredNorm() / dof, var_floor);
  var_y_ = std::max(resid.col(1).squaredNorm() / dof, var_floor);
}

PositionEstimate LinearRegressor::predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const {
  if (input.size() + 1 != coef_.rows()) throw DomainError("LR: input width mismatch");
  PositionEstimate e;
  e.mean.x = coef_(0, 0) + input.dot(coef_.col(0).tail(input.size()));
  e.mean.y = coef_(0, 1) + input.dot(coef_.col(1).tail(input.size()));
  e.var_x = var_x_;
  e.var_y = var_y_;
  return e;
}

FusionResult distributed_median_with(Regressor regressor, std::span<const FingerprintDB> per_ap,
                                     std::span<const TestObservation> obs) {
  if (per_ap.size() != obs.size()) throw DomainError("one observation per AP is required");
  std::vector<PositionEstimate> est;
  est.reserve(per_ap.size());
  for (std::size_t a = 0; a < per_ap.size(); ++a) {
    const Eigen::MatrixXd inputs = per_ap[a].hybrid();
    const Eigen::RowVectorXd row = hybrid_input(obs[a]);
    PositionEstimate e = regressor == Regressor::kKnn
                             ? KnnRegressor(inputs, per_ap[a].rp_positions).predict(row)
                             : LinearRegressor(inputs, per_ap[a].rp_positions).predict(row);
    e.source = std::to_string(per_ap[a].ap_index);
    est.push_back(std::move(e));
  }
  return fuse_median(est);
}

}  // namespace cfloc
