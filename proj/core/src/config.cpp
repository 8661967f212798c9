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

#include "cfloc/config.hpp"

#include <cmath>
#include <charconv>
#include <functional>
#include <map>

#include "cfloc/errors.hpp"

namespace cfloc {
namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError(key, "trailing characters in '" + v + "'");
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError(key, "not a number: '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    // Accept integral doubles such as "64.0" written by JSON serialisers.
    const double d = parse_double(key, v);
    if (std::floor(d) != d) throw ConfigError(key, "not an integer: '" + v + "'");
    return static_cast<long long>(d);
  }
  return out;
}

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(field, what);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(std::isfinite(area_side_m) && area_side_m > 0, "area_side_m", "must be positive");
  require(num_aps >= 1, "num_aps", "must be >= 1");
  require(num_antennas >= 2, "num_antennas", "must be >= 2");
  require(num_rps >= 1, "num_rps", "must be >= 1");
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_rps))));
  require(side * side == num_rps, "num_rps", "must be a perfect square");
  require(pilot_length >= 1, "pilot_length", "must be >= 1");
  require(carrier_freq_hz > 0, "carrier_freq_hz", "must be positive");
  require(antenna_spacing_wavelengths > 0, "antenna_spacing_wavelengths", "must be positive");
  require(ap_height_m > 0, "ap_height_m", "must be positive");
  require(ue_height_m > 0, "ue_height_m", "must be positive");
  require(tx_power_mw > 0, "tx_power_mw", "must be positive");
  require(std::isfinite(noise_power_dbm), "noise_power_dbm", "must be finite");
  require(std::isfinite(noise_figure_db), "noise_figure_db", "must be finite");
  require(std::isfinite(pathloss_ref_db), "pathloss_ref_db", "must be finite");
  require(pathloss_exp > 0, "pathloss_exp", "must be positive");
  require(shadow_sigma_db >= 0, "shadow_sigma_db", "must be non-negative");
  require(decorr_dist_m > 0, "decorr_dist_m", "must be positive");
  require(angular_spread_deg >= 0 && angular_spread_deg <= kMaxAngularSpreadDeg, "angular_spread_deg",
          "must lie in [0, 15] degrees for the small-angle disk model");
  require(rss_samples >= 1, "rss_samples", "must be >= 1");
  require(offline_aoa_noise_deg >= 0, "offline_aoa_noise_deg", "must be non-negative");
  require(scattering_paths >= 1, "scattering_paths", "must be >= 1");
}

double ScenarioConfig::noise_power_mw() const {
  return std::pow(10.0, (noise_power_dbm + noise_figure_db) / 10.0);
}

int ScenarioConfig::grid_side() const {
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_rps))));
}

bool set_config_value(ScenarioConfig& c, const std::string& key, const std::string& v) {
  using Setter = std::function<void(ScenarioConfig&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"area_side_m", [](auto& c, auto& v) { c.area_side_m = parse_double("area_side_m", v); }},
      {"num_aps", [](auto& c, auto& v) { c.num_aps = static_cast<int>(parse_int("num_aps", v)); }},
      {"num_antennas",
       [](auto& c, auto& v) { c.num_antennas = static_cast<int>(parse_int("num_antennas", v)); }},
      {"num_rps", [](auto& c, auto& v) { c.num_rps = static_cast<int>(parse_int("num_rps", v)); }},
      {"pilot_length",
       [](auto& c, auto& v) { c.pilot_length = static_cast<int>(parse_int("pilot_length", v)); }},
      {"carrier_freq_hz", [](auto& c, auto& v) { c.carrier_freq_hz = parse_double("carrier_freq_hz", v); }},
      {"antenna_spacing_wavelengths",
       [](auto& c, auto& v) {
         c.antenna_spacing_wavelengths = parse_double("antenna_spacing_wavelengths", v);
       }},
      {"ap_height_m", [](auto& c, auto& v) { c.ap_height_m = parse_double("ap_height_m", v); }},
      {"ue_height_m", [](auto& c, auto& v) { c.ue_height_m = parse_double("ue_height_m", v); }},
      {"tx_power_mw", [](auto& c, auto& v) { c.tx_power_mw = parse_double("tx_power_mw", v); }},
      {"noise_power_dbm", [](auto& c, auto& v) { c.noise_power_dbm = parse_double("noise_power_dbm", v); }},
      {"noise_figure_db", [](auto& c, auto& v) { c.noise_figure_db = parse_double("noise_figure_db", v); }},
      {"pathloss_ref_db", [](auto& c, auto& v) { c.pathloss_ref_db = parse_double("pathloss_ref_db", v); }},
      {"pathloss_exp", [](auto& c, auto& v) { c.pathloss_exp = parse_double("pathloss_exp", v); }},
      {"shadow_sigma_db", [](auto& c, auto& v) { c.shadow_sigma_db = parse_double("shadow_sigma_db", v); }},
      {"decorr_dist_m", [](auto& c, auto& v) { c.decorr_dist_m = parse_double("decorr_dist_m", v); }},
      {"angular_spread_deg",
       [](auto& c, auto& v) { c.angular_spread_deg = parse_double("angular_spread_deg", v); }},
      {"rss_samples",
       [](auto& c, auto& v) { c.rss_samples = static_cast<int>(parse_int("rss_samples", v)); }},
      {"offline_aoa_noise_deg",
       [](auto& c, auto& v) { c.offline_aoa_noise_deg = parse_double("offline_aoa_noise_deg", v); }},
      {"scattering_paths",
       [](auto& c, auto& v) { c.scattering_paths = static_cast<int>(parse_int("scattering_paths", v)); }},
      {"seed", [](auto& c, auto& v) { c.seed = static_cast<std::uint64_t>(parse_int("seed", v)); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) return false;
  it->second(c, v);
  return true;
}

}  // namespace cfloc
