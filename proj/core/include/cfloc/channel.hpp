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

#include <Eigen/Core>

#include "cfloc/config.hpp"
#include "cfloc/rng.hpp"

namespace cfloc {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using SignalBlock = Eigen::MatrixXcd;  // N x z received block

/// Array and link parameters shared by covariance synthesis, signal
/// sampling and the AOA bound.
struct ArrayModel {
  int num_antennas = 8;
  double d_over_lambda = 0.5;
  double angular_spread_deg = 10.0;
  double tx_power_mw = 100.0;
  double noise_power_mw = 1.0;  // effective, noise figure included
  int scattering_paths = 200;
  int pilot_length = 1;

  static ArrayModel from(const ScenarioConfig& cfg);
};

/// Second-order statistics of one UE-AP link.
struct ChannelStats {
  double beta_linear = 0.0;
  double nominal_aoa_deg = 0.0;
  CMatrix disk_cov;  // N x N Hermitian, noise floor included
};

/// ULA response, element n = exp(-j 2 pi (d/lambda) n cos(theta)).
CVector steering_vector(double theta_deg, int num_antennas, double d_over_lambda);

/// Real symmetric Toeplitz matrix G with G_mn = J0((m-n) zeta) + J2((m-n) zeta),
/// zeta = 2 pi (d/lambda) spread_rad sin(theta).
Eigen::MatrixXd disk_scaling_matrix(double theta_deg, int num_antennas, double d_over_lambda,
                                    double angular_spread_deg);

/// rho beta G(zeta) .* a a^H + sigma_n^2 I for a unit pilot (z = 1).
CMatrix disk_covariance(double beta_linear, double theta_deg, const ArrayModel& model);

ChannelStats make_channel_stats(double beta_linear, double theta_deg, const ArrayModel& model);

/// Draws a path-angle offset from the disk scattering density: the
/// semicircle law on [-spread, spread], i.e. the abscissa of a point
/// uniform in a disk. Returned in radians.
double sample_disk_offset_rad(double angular_spread_rad, Rng& rng);

/// S_Y received blocks Y = sqrt(rho) h psi^H + W with psi the all-ones pilot.
/// Each block redraws the M-path channel h and the noise W.
std::vector<SignalBlock> sample_received_signal(const ChannelStats& stats, const ArrayModel& model,
                                                int num_blocks, Rng& rng);

/// Draws one multipath channel realisation h (no noise, no transmit power).
CVector sample_channel(const ChannelStats& stats, const ArrayModel& model, Rng& rng);

}  // namespace cfloc
