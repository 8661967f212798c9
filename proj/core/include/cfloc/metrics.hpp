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
#include <string>
#include <vector>

#include "cfloc/estimate.hpp"
#include "cfloc/geometry.hpp"

namespace cfloc {

/// 95% quantile of the chi-square distribution with two degrees of freedom.
inline constexpr double kChi2Dof2Q95 = 5.991;

double localization_error(const Point2& truth, const Point2& estimate);

/// Area of the 95% ellipse, 5.991 pi sqrt(v1 v2). Throws DomainError for v <= 0.
double ellipse_area(double var_x, double var_y);

/// (x - mx)^2 / (5.991 vx) + (y - my)^2 / (5.991 vy) <= 1.
bool ellipse_covers(const Point2& truth, const PositionEstimate& estimate);

/// One (setup, test point, method) outcome.
struct TrialRecord {
  long setup_id = 0;
  long test_id = 0;
  std::string method;
  Point2 truth;
  Point2 estimate;
  double var_x = 0.0;
  double var_y = 0.0;
  double err_m = 0.0;
  double ellipse_area_m2 = 0.0;
  bool covered = false;
};

/// Fills the derived columns (error, area, coverage) from the estimate.
TrialRecord make_trial_record(long setup_id, long test_id, const std::string& method, const Point2& truth,
                              const PositionEstimate& estimate);

const std::vector<std::string>& trial_csv_header();
void write_trial_header(std::ostream& out);
void write_trial_row(std::ostream& out, const TrialRecord& r);

/// Throws ParseError (with line number) on a malformed header or row.
std::vector<TrialRecord> read_trials(std::istream& in);

}  // namespace cfloc
