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

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfloc/config.hpp"
#include "cfloc/errors.hpp"
#include "cfloc/geometry.hpp"
#include "cfloc/scenario.hpp"
#include "doctest.h"

using namespace cfloc;

TEST_CASE("rp_grid places a 2x2 grid at cell centres") {
  const auto g = rp_grid(200.0, 4);
  REQUIRE(g.rows() == 4);
  CHECK(g(0, 0) == 50.0);
  CHECK(g(0, 1) == 50.0);
  CHECK(g(1, 0) == 150.0);
  CHECK(g(1, 1) == 50.0);
  CHECK(g(2, 0) == 50.0);
  CHECK(g(2, 1) == 150.0);
  CHECK(g(3, 0) == 150.0);
  CHECK(g(3, 1) == 150.0);
}

TEST_CASE("rp_grid is a uniform grid inside the area") {
  const auto g = rp_grid(200.0, 225);
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    CHECK(g(k, 0) > 0.0);
    CHECK(g(k, 0) < 200.0);
    CHECK(g(k, 1) > 0.0);
    CHECK(g(k, 1) < 200.0);
  }
  CHECK(g(1, 0) - g(0, 0) == doctest::Approx(200.0 / 15.0));
  CHECK(g(15, 1) - g(0, 1) == doctest::Approx(200.0 / 15.0));
}

TEST_CASE("generate_scenario is deterministic and stays in the area") {
  ScenarioConfig cfg;
  cfg.seed = 77;
  const auto a = generate_scenario(cfg, 50);
  const auto b = generate_scenario(cfg, 50);
  REQUIRE(a.num_aps() == cfg.num_aps);
  for (int l = 0; l < a.num_aps(); ++l) {
    CHECK(a.ap_positions[l].x == b.ap_positions[l].x);
    CHECK(a.ap_positions[l].y == b.ap_positions[l].y);
    CHECK(a.ap_positions[l].z == cfg.ap_height_m);
  }
  for (std::size_t t = 0; t < a.test_points.size(); ++t) {
    CHECK(a.test_points[t].x == b.test_points[t].x);
    CHECK(a.test_points[t].x >= 0.0);
    CHECK(a.test_points[t].x <= 200.0);
    CHECK(a.test_points[t].y >= 0.0);
    CHECK(a.test_points[t].y <= 200.0);
  }
  cfg.seed = 78;
  const auto c = generate_scenario(cfg, 1);
  CHECK(c.ap_positions[0].x != a.ap_positions[0].x);
}

TEST_CASE("AP x-coordinates are uniform on the area (Kolmogorov-Smirnov)") {
  ScenarioConfig cfg;
  cfg.num_aps = 25;
  std::vector<double> xs;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    cfg.seed = 1000 + s;
    for (const auto& ap : generate_scenario(cfg, 0).ap_positions) xs.push_back(ap.x / cfg.area_side_m);
  }
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - xs[i]));
    d = std::max(d, std::abs(xs[i] - static_cast<double>(i) / n));
  }
  // Asymptotic 1% critical value of the one-sample KS statistic.
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("pathloss_db follows the log-distance law") {
  ScenarioConfig cfg;
  cfg.ap_height_m = cfg.ue_height_m;  // ground distance equals 3-D distance
  const Point3 ap{0.0, 0.0, cfg.ap_height_m};
  CHECK(pathloss_db(ap, {1.0, 0.0}, cfg) == doctest::Approx(-28.8).epsilon(1e-12));
  CHECK(pathloss_db(ap, {10.0, 0.0}, cfg) == doctest::Approx(-64.1).epsilon(1e-12));
  const double drop = pathloss_db(ap, {20.0, 0.0}, cfg) - pathloss_db(ap, {40.0, 0.0}, cfg);
  CHECK(drop == doctest::Approx(10.0 * 3.53 * std::log10(2.0)));
  CHECK(drop == doctest::Approx(10.63).epsilon(1e-3));
  CHECK_THROWS_AS(pathloss_db(ap, {0.0, 0.0}, cfg), DomainError);
}

TEST_CASE("pathloss_db uses the height difference") {
  ScenarioConfig cfg;
  const Point3 ap{0.0, 0.0, 10.0};
  CHECK(pathloss_db(ap, {0.0, 0.0}, cfg) == doctest::Approx(-28.8 - 35.3 * std::log10(8.5)));
}

TEST_CASE("nominal_aoa_deg quadrants") {
  CHECK(nominal_aoa_deg({0, 0}, {1, 1}) == doctest::Approx(45.0));
  CHECK(nominal_aoa_deg({0, 0}, {-1, 0}) == 180.0);
  CHECK(nominal_aoa_deg({10, 20}, {10, 25}) == doctest::Approx(90.0));
  CHECK(nominal_aoa_deg({0, 0}, {1, -1}) == doctest::Approx(-45.0));
  CHECK_THROWS_AS(nominal_aoa_deg({3, 4}, {3, 4}), DomainError);
}

TEST_CASE("wrap_deg maps into (-180, 180]") {
  CHECK(wrap_deg(179.5 + 1.0) == doctest::Approx(-179.5));
  CHECK(wrap_deg(-180.0) == 180.0);
  CHECK(wrap_deg(180.0) == 180.0);
  CHECK(wrap_deg(540.0) == 180.0);
  CHECK(wrap_deg(-190.0) == doctest::Approx(170.0));
}

TEST_CASE("config validation names the offending field") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.grid_side() == 8);
  CHECK(cfg.noise_power_mw() == doctest::Approx(std::pow(10.0, -8.8)));

  auto field_of = [](const ScenarioConfig& c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  ScenarioConfig bad = cfg;
  bad.num_rps = 50;
  CHECK(field_of(bad) == "num_rps");
  bad = cfg;
  bad.angular_spread_deg = 16.0;
  CHECK(field_of(bad) == "angular_spread_deg");
  bad = cfg;
  bad.num_antennas = 1;
  CHECK(field_of(bad) == "num_antennas");
  bad = cfg;
  bad.num_aps = 0;
  CHECK(field_of(bad) == "num_aps");
  bad = cfg;
  bad.decorr_dist_m = 0.0;
  CHECK(field_of(bad) == "decorr_dist_m");
}

TEST_CASE("set_config_value parses keys") {
  ScenarioConfig cfg;
  CHECK(set_config_value(cfg, "num_antennas", "16"));
  CHECK(cfg.num_antennas == 16);
  CHECK(set_config_value(cfg, "shadow_sigma_db", "4.5"));
  CHECK(cfg.shadow_sigma_db == 4.5);
  CHECK_FALSE(set_config_value(cfg, "no_such_key", "1"));
  CHECK_THROWS_AS(set_config_value(cfg, "num_aps", "nine"), ConfigError);
  CHECK_THROWS_AS(set_config_value(cfg, "num_aps", "9.5"), ConfigError);
}

TEST_CASE("scenario_to_json mentions every AP") {
  ScenarioConfig cfg;
  const auto s = generate_scenario(cfg, 2);
  const auto text = scenario_to_json(s);
  CHECK(text.find("ap_positions") != std::string::npos);
  CHECK(text.find("test_points") != std::string::npos);
}
