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

#include "cfloc/config.hpp"
#include "json.hpp"

namespace cfloc::detail {

inline nlohmann::json to_json(const ScenarioConfig& c) {
  return {
      {"area_side_m", c.area_side_m},
      {"num_aps", c.num_aps},
      {"num_antennas", c.num_antennas},
      {"num_rps", c.num_rps},
      {"pilot_length", c.pilot_length},
      {"carrier_freq_hz", c.carrier_freq_hz},
      {"antenna_spacing_wavelengths", c.antenna_spacing_wavelengths},
      {"ap_height_m", c.ap_height_m},
      {"ue_height_m", c.ue_height_m},
      {"tx_power_mw", c.tx_power_mw},
      {"noise_power_dbm", c.noise_power_dbm},
      {"noise_figure_db", c.noise_figure_db},
      {"pathloss_ref_db", c.pathloss_ref_db},
      {"pathloss_exp", c.pathloss_exp},
      {"shadow_sigma_db", c.shadow_sigma_db},
      {"decorr_dist_m", c.decorr_dist_m},
      {"angular_spread_deg", c.angular_spread_deg},
      {"rss_samples", c.rss_samples},
      {"offline_aoa_noise_deg", c.offline_aoa_noise_deg},
      {"scattering_paths", c.scattering_paths},
      {"seed", c.seed},
  };
}

}  // namespace cfloc::detail
