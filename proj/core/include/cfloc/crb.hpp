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

#include "cfloc/channel.hpp"
#include "cfloc/rng.hpp"

namespace cfloc {

/// Inputs of the single-parameter AOA bound under the disk model.
struct CrbConfig {
  int num_antennas = 8;
  double d_over_lambda = 0.5;
  double angular_spread_deg = 10.0;
  double tx_power_mw = 100.0;
  double beta_linear = 1.0;
  double noise_power_mw = 1.0;
  double theta_deg = 60.0;
  int num_measurements = 200;  // S_M

  static CrbConfig from(const ArrayModel& model, double beta_linear, double theta_deg, int num_measurements);
  ArrayModel array_model() const;
};

/// Derivative of the disk covariance with respect to the AOA in radians.
CMatrix disk_covariance_derivative(const CrbConfig& cfg);

struct CrbResult {
  double var_rad2 = 0.0;
  double var_deg2 = 0.0;
  double fisher = 0.0;  // per measurement
};

/// 1 / (S_M tr(R^-1 R' R^-1 R')). Throws NumericError when the information
/// is non-positive or non-finite, DomainError on invalid inputs.
CrbResult crb_aoa_variance(const CrbConfig& cfg);

/// true_aoa_deg + N(0, var_deg2), wrapped into (-180, 180].
double crb_noised_aoa(double true_aoa_deg, double var_deg2, Rng& rng);

}  // namespace cfloc
