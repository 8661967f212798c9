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

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cfloc/channel.hpp"
#include "cfloc/geometry.hpp"
#include "cfloc/rng.hpp"

namespace cfloc {

/// Offline database of one AP: row k holds the (RSS, AOA) fingerprint of RP k.
struct FingerprintDB {
  int ap_index = 0;
  Eigen::VectorXd rss_db;          // K, dB relative to the transmit power
  Eigen::VectorXd aoa_deg;         // K, (-180, 180]
  Eigen::MatrixX2d rp_positions;   // K x 2

  int size() const { return static_cast<int>(rss_db.size()); }

  /// K x 2 hybrid input matrix [rss_db, aoa_deg].
  Eigen::MatrixXd hybrid() const;
};

/// Online measurement of the UE by one AP.
struct TestObservation {
  int ap_index = 0;
  double rss_db = 0.0;
  double aoa_deg = 0.0;
};

/// 10 log10(mean ||Y||_F^2 / rho). Throws NumericError for zero power or no blocks.
double estimate_rss_db(std::span<const SignalBlock> blocks, double tx_power_mw);

/// Geometric AOA plus Gaussian measurement noise of the given standard deviation,
/// wrapped into (-180, 180].
double offline_aoa_deg(const Point2& ap, const Point2& rp, double noise_std_deg, Rng& rng);

/// (1/S) sum Y Y^H over the blocks.
CMatrix sample_covariance(std::span<const SignalBlock> blocks);

/// a^H U_n U_n^H a for an explicit noise subspace basis.
double music_denominator(const CMatrix& noise_subspace, double theta_deg, double d_over_lambda);

struct MusicResult {
  double aoa_deg = 0.0;
  bool degenerate = false;  // all eigenvalues equal; peak is not meaningful
};

/// MUSIC with a one-dimensional signal subspace over a uniform grid on the
/// open interval (0, 180) degrees. Grid steering vectors are cached, so one
/// estimator should be reused across calls.
class MusicEstimator {
 public:
  MusicEstimator(int num_antennas, double d_over_lambda, double grid_step_deg = 0.05);

  MusicResult estimate(std::span<const SignalBlock> blocks) const;
  MusicResult estimate_from_covariance(const CMatrix& covariance) const;

  double grid_step_deg() const { return step_; }
  const std::vector<double>& grid_deg() const { return grid_; }

 private:
  int n_;
  double d_;
  double step_;
  std::vector<double> grid_;
  CMatrix steering_;  // N x grid
};

MusicResult music_aoa_deg(std::span<const SignalBlock> blocks, int num_antennas, double d_over_lambda,
                          double grid_step_deg = 0.05);

/// Maps a ULA estimate in (0, 180) onto the half-plane of `reference_deg`.
/// The array cannot distinguish theta from -theta; the simulator resolves
/// it with the known side of the array.
double resolve_ula_ambiguity(double music_deg, double reference_deg);

/// CSV columns: rp_index,x,y,rss_db,aoa_deg
void write_fingerprint_csv(std::ostream& out, const FingerprintDB& db);
FingerprintDB read_fingerprint_csv(std::istream& in, int ap_index);

}  // namespace cfloc
