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

#include "cfloc/fingerprint.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "cfloc/errors.hpp"
#include "cfloc/scenario.hpp"
#include "csv_util.hpp"

namespace cfloc {

Eigen::MatrixXd FingerprintDB::hybrid() const {
  Eigen::MatrixXd x(rss_db.size(), 2);
  x.col(0) = rss_db;
  x.col(1) = aoa_deg;
  return x;
}

double estimate_rss_db(std::span<const SignalBlock> blocks, double tx_power_mw) {
  if (blocks.empty()) throw NumericError("estimate_rss_db: no signal blocks");
  double sum = 0.0;
  for (const auto& y : blocks) sum += y.squaredNorm();
  const double mean = sum / static_cast<double>(blocks.size());
  if (!(mean > 0.0) || !std::isfinite(mean)) throw NumericError("estimate_rss_db: zero or non-finite power");
  return 10.0 * std::log10(mean / tx_power_mw);
}

double offline_aoa_deg(const Point2& ap, const Point2& rp, double noise_std_deg, Rng& rng) {
  const double nominal = nominal_aoa_deg(ap, rp);
  if (noise_std_deg == 0.0) return nominal;
  std::normal_distribution<double> normal(0.0, noise_std_deg);
  return wrap_deg(nominal + normal(rng));
}

CMatrix sample_covariance(std::span<const SignalBlock> blocks) {
  if (blocks.empty()) throw NumericError("sample_covariance: no signal blocks");
  const auto n = blocks.front().rows();
  CMatrix r = CMatrix::Zero(n, n);
  double count = 0.0;
  for (const auto& y : blocks) {
    r.noalias() += y * y.adjoint();
    count += static_cast<double>(y.cols());
  }
  return r / count;
}

double music_denominator(const CMatrix& noise_subspace, double theta_deg, double d_over_lambda) {
  const CVector a = steering_vector(theta_deg, static_cast<int>(noise_subspace.rows()), d_over_lambda);
  return (noise_subspace.adjoint() * a).squaredNorm();
}

MusicEstimator::MusicEstimator(int num_antennas, double d_over_lambda, double grid_step_deg)
    : n_(num_antennas), d_(d_over_lambda), step_(grid_step_deg) {
  if (num_antennas < 2) throw DomainError("MUSIC needs at least two antennas");
  if (!(grid_step_deg > 0.0) || grid_step_deg >= 90.0) throw DomainError("MUSIC grid step out of range");
  const auto count = static_cast<int>(std::lround(180.0 / grid_step_deg));
  for (int i = 1; i < count; ++i) grid_.push_back(i * grid_step_deg);
  steering_.resize(n_, static_cast<Eigen::Index>(grid_.size()));
  for (std::size_t g = 0; g < grid_.size(); ++g)
    steering_.col(static_cast<Eigen::Index>(g)) = steering_vector(grid_[g], n_, d_);
}

MusicResult MusicEstimator::estimate(std::span<const SignalBlock> blocks) const {
  return estimate_from_covariance(sample_covariance(blocks));
}

MusicResult MusicEstimator::estimate_from_covariance(const CMatrix& covariance) const {
  if (covariance.rows() != n_ || covariance.cols() != n_)
    throw DomainError("MUSIC covariance has the wrong dimension");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(covariance);
  if (eig.info() != Eigen::Success) throw NumericError("MUSIC: eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  MusicResult result;
  const double top = lambda(n_ - 1);
  result.degenerate = !(top - lambda(0) > 1e-12 * std::abs(top));

  // The noise subspace is the orthogonal complement of the principal
  // eigenvector u1, so a^H Un Un^H a = ||a||^2 - |u1^H a|^2 = N - |u1^H a|^2.
  const CVector u1 = eig.eigenvectors().col(n_ - 1);
  const Eigen::RowVectorXcd proj = u1.adjoint() * steering_;
  Eigen::Index best = 0;
  double best_den = std::numeric_limits<double>::infinity();
  for (Eigen::Index g = 0; g < proj.size(); ++g) {
    const double den = static_cast<double>(n_) - std::norm(proj(g));
    if (den < best_den) {
      best_den = den;
      best = g;
    }
  }
  result.aoa_deg = grid_[static_cast<std::size_t>(best)];
  return result;
}

MusicResult music_aoa_deg(std::span<const SignalBlock> blocks, int num_antennas, double d_over_lambda,
                          double grid_step_deg) {
  return MusicEstimator(num_antennas, d_over_lambda, grid_step_deg).estimate(blocks);
}

double resolve_ula_ambiguity(double music_deg, double reference_deg) {
  return reference_deg < 0.0 ? -music_deg : music_deg;
}

void write_fingerprint_csv(std::ostream& out, const FingerprintDB& db) {
  out << "rp_index,x,y,rss_db,aoa_deg\n";
  for (int k = 0; k < db.size(); ++k) {
    out << fmt::format("{},{},{},{},{}\n", k, detail::fmt_real(db.rp_positions(k, 0)),
                       detail::fmt_real(db.rp_positions(k, 1)), detail::fmt_real(db.rss_db(k)),
                       detail::fmt_real(db.aoa_deg(k)));
  }
}

FingerprintDB read_fingerprint_csv(std::istream& in, int ap_index) {
  const auto table = detail::read_csv(in, {"rp_index", "x", "y", "rss_db", "aoa_deg"});
  FingerprintDB db;
  db.ap_index = ap_index;
  const auto k = static_cast<Eigen::Index>(table.rows.size());
  db.rss_db.resize(k);
  db.aoa_deg.resize(k);
  db.rp_positions.resize(k, 2);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    const auto line = table.lines[static_cast<std::size_t>(i)];
    const long idx = detail::parse_long(row[0], line);
    if (idx != i) throw ParseError("rp_index out of order", line);
    db.rp_positions(i, 0) = detail::parse_real(row[1], line);
    db.rp_positions(i, 1) = detail::parse_real(row[2], line);
    db.rss_db(i) = detail::parse_real(row[3], line);
    db.aoa_deg(i) = detail::parse_real(row[4], line);
  }
  return db;
}

}  // namespace cfloc
