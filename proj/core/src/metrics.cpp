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

#include "cfloc/metrics.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "cfloc/errors.hpp"
#include "csv_util.hpp"

namespace cfloc {

double localization_error(const Point2& truth, const Point2& estimate) { return distance(truth, estimate); }

double ellipse_area(double var_x, double var_y) {
  if (!(var_x > 0.0) || !(var_y > 0.0)) throw DomainError("ellipse_area: variances must be positive");
  return kChi2Dof2Q95 * kPi * std::sqrt(var_x * var_y);
}

bool ellipse_covers(const Point2& truth, const PositionEstimate& e) {
  const double dx = truth.x - e.mean.x;
  const double dy = truth.y - e.mean.y;
  return dx * dx / (kChi2Dof2Q95 * e.var_x) + dy * dy / (kChi2Dof2Q95 * e.var_y) <= 1.0;
}

TrialRecord make_trial_record(long setup_id, long test_id, const std::string& method, const Point2& truth,
                              const PositionEstimate& estimate) {
  TrialRecord r;
  r.setup_id = setup_id;
  r.test_id = test_id;
  r.method = method;
  r.truth = truth;
  r.estimate = estimate.mean;
  r.var_x = estimate.var_x;
  r.var_y = estimate.var_y;
  r.err_m = localization_error(truth, estimate.mean);
  r.ellipse_area_m2 = ellipse_area(estimate.var_x, estimate.var_y);
  r.covered = ellipse_covers(truth, estimate);
  return r;
}

const std::vector<std::string>& trial_csv_header() {
  static const std::vector<std::string> header{"setup_id", "test_id", "method",  "true_x",
                                               "true_y",   "est_x",   "est_y",   "var_x",
                                               "var_y",    "err_m",   "ellipse_area_m2", "covered"};
  return header;
}

void write_trial_header(std::ostream& out) {
  out << "setup_id,test_id,method,true_x,true_y,est_x,est_y,var_x,var_y,err_m,ellipse_area_m2,covered\n";
}

void write_trial_row(std::ostream& out, const TrialRecord& r) {
  using detail::fmt_real;
  out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.setup_id, r.test_id, r.method, fmt_real(r.truth.x),
                     fmt_real(r.truth.y), fmt_real(r.estimate.x), fmt_real(r.estimate.y), fmt_real(r.var_x),
                     fmt_real(r.var_y), fmt_real(r.err_m), fmt_real(r.ellipse_area_m2), r.covered ? 1 : 0);
}

std::vector<TrialRecord> read_trials(std::istream& in) {
  const auto table = detail::read_csv(in, trial_csv_header());
  std::vector<TrialRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto line = table.lines[i];
    TrialRecord r;
    r.setup_id = detail::parse_long(row[0], line);
    r.test_id = detail::parse_long(row[1], line);
    if (row[2].empty()) throw ParseError("empty method", line);
    r.method = row[2];
    r.truth = {detail::parse_real(row[3], line), detail::parse_real(row[4], line)};
    r.estimate = {detail::parse_real(row[5], line), detail::parse_real(row[6], line)};
    r.var_x = detail::parse_real(row[7], line);
    r.var_y = detail::parse_real(row[8], line);
    r.err_m = detail::parse_real(row[9], line);
    r.ellipse_area_m2 = detail::parse_real(row[10], line);
    r.covered = detail::parse_bool(row[11], line);
    if (!(r.err_m >= 0.0)) throw ParseError("err_m must be non-negative", line);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cfloc
