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

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cfloc/config.hpp"
#include "cfloc/geometry.hpp"

namespace cfloc {

/// One random deployment: AP placement, the RP grid and the test points.
/// Immutable once generated.
struct Scenario {
  std::vector<Point3> ap_positions;
  Eigen::MatrixX2d rp_positions;  // K x 2, row k = RP k
  std::vector<Point2> test_points;
  ScenarioConfig config;

  int num_aps() const { return static_cast<int>(ap_positions.size()); }
  int num_rps() const { return static_cast<int>(rp_positions.rows()); }
  Point2 rp(int k) const { return {rp_positions(k, 0), rp_positions(k, 1)}; }
};

/// RP grid: cell centres of a uniform sqrt(K) x sqrt(K) partition of the
/// area, row-major with x varying fastest.
Eigen::MatrixX2d rp_grid(double area_side_m, int num_rps);

/// APs and test points are drawn uniformly over the area from the
/// kScenario stream of config.seed. Throws ConfigError on invalid config.
Scenario generate_scenario(const ScenarioConfig& config, std::size_t num_test_points = 1);

/// Log-distance path loss p0 - 10 gamma log10(d / 1 m) in dB, without shadowing.
/// Throws DomainError for coincident points.
double pathloss_db(const Point3& ap, const Point2& loc, const ScenarioConfig& config);

/// Four-quadrant azimuth from the AP to the location in degrees, (-180, 180].
/// Throws DomainError for coincident ground coordinates.
double nominal_aoa_deg(const Point2& ap, const Point2& loc);

/// Debug dump of a scenario as JSON text.
std::string scenario_to_json(const Scenario& scenario);

}  // namespace cfloc
