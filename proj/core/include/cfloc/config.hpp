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

#include <cstdint>
#include <string>

namespace cfloc {

/// Physical and simulation parameters of one cell-free deployment.
///
/// Defaults follow the urban-micro setup: 200 m square area, 2 GHz carrier,
/// half-wavelength ULAs, 10 m AP height, 1.5 m UE height, 100 mW uplink power,
/// -96 dBm noise with an 8 dB noise figure, 3GPP UMi NLOS path loss.
struct ScenarioConfig {
  double area_side_m = 200.0;
  int num_aps = 9;
  int num_antennas = 8;
  int num_rps = 64;
  int pilot_length = 1;
  double carrier_freq_hz = 2e9;
  double antenna_spacing_wavelengths = 0.5;
  double ap_height_m = 10.0;
  double ue_height_m = 1.5;
  double tx_power_mw = 100.0;
  double noise_power_dbm = -96.0;
  double noise_figure_db = 8.0;
  double pathloss_ref_db = -28.8;
  double pathloss_exp = 3.53;
  double shadow_sigma_db = 8.0;
  double decorr_dist_m = 13.0;
  double angular_spread_deg = 10.0;
  int rss_samples = 200;
  double offline_aoa_noise_deg = 2.0;  // standard deviation
  int scattering_paths = 200;
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  /// Receiver noise power in mW with the noise figure folded in.
  double noise_power_mw() const;

  /// sqrt(num_rps); valid only after validate().
  int grid_side() const;
};

/// Largest angular spread for which the small-angle disk model is accepted.
inline constexpr double kMaxAngularSpreadDeg = 15.0;

/// Applies a single flat key to a config. Returns false for unknown keys.
/// Throws ConfigError if the value cannot be converted.
bool set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

}  // namespace cfloc
