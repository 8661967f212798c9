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

#include "cfloc/scenario.hpp"

#include <cmath>
#include <random>

#include "cfloc/errors.hpp"
#include "cfloc/rng.hpp"
#include "json_util.hpp"

namespace cfloc {

Eigen::MatrixX2d rp_grid(double area_side_m, int num_rps) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_rps))));
  if (side * side != num_rps) throw ConfigError("num_rps", "must be a perfect square");
  const double cell = area_side_m / side;
  Eigen::MatrixX2d rps(num_rps, 2);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      const int k = j * side + i;
      rps(k, 0) = (i + 0.5) * cell;
      rps(k, 1) = (j + 0.5) * cell;
    }
  }
  return rps;
}

Scenario generate_scenario(const ScenarioConfig& config, std::size_t num_test_points) {
  config.validate();
  Scenario s;
  s.config = config;
  Rng rng = make_stream(config.seed, StreamTag::kScenario);
  std::uniform_real_distribution<double> u(0.0, config.area_side_m);
  s.ap_positions.reserve(static_cast<std::size_t>(config.num_aps));
  for (int l = 0; l < config.num_aps; ++l) {
    const double x = u(rng);
    const double y = u(rng);
    s.ap_positions.push_back({x, y, config.ap_height_m});
  }
  s.rp_positions = rp_grid(config.area_side_m, config.num_rps);
  s.test_points.reserve(num_test_points);
  for (std::size_t t = 0; t < num_test_points; ++t) {
    const double x = u(rng);
    const double y = u(rng);
    s.test_points.push_back({x, y});
  }
  return s;
}

double pathloss_db(const Point3& ap, const Point2& loc, const ScenarioConfig& config) {
  const double d = distance(ap, Point3{loc.x, loc.y, config.ue_height_m});
  if (!(d > 0.0)) throw DomainError("pathloss_db: AP and location coincide");
  return config.pathloss_ref_db - 10.0 * config.pathloss_exp * std::log10(d);
}

double nominal_aoa_deg(const Point2& ap, const Point2& loc) {
  const double dx = loc.x - ap.x;
  const double dy = loc.y - ap.y;
  if (dx == 0.0 && dy == 0.0) throw DomainError("nominal_aoa_deg: AP and location coincide in the plane");
  double a = rad_to_deg(std::atan2(dy, dx));
  if (a == -180.0) a = 180.0;
  return a;
}

std::string scenario_to_json(const Scenario& s) {
  using nlohmann::json;
  json aps = json::array();
  for (const auto& p : s.ap_positions) aps.push_back({p.x, p.y, p.z});
  json rps = json::array();
  for (int k = 0; k < s.num_rps(); ++k) rps.push_back({s.rp_positions(k, 0), s.rp_positions(k, 1)});
  json tps = json::array();
  for (const auto& p : s.test_points) tps.push_back({p.x, p.y});
  const json cfg = detail::to_json(s.config);
  json out = {{"config", cfg}, {"ap_positions", aps}, {"rp_positions", rps}, {"test_points", tps}};
  return out.dump(2);
}

}  // namespace cfloc
