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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfloc/estimate.hpp"

namespace cfloc {

enum class FusionMethod { kMedian, kMean, kBayesian, kZScore };

std::string_view to_string(FusionMethod m);
/// Accepts median, mean, bayesian, zscore. Throws ConfigError otherwise.
FusionMethod parse_fusion_method(std::string_view name);

inline constexpr double kDefaultZScoreThreshold = 1.0;

struct FusionResult {
  PositionEstimate estimate;
  std::vector<int> retained_x;  // AP indices kept for x (z-score only)
  std::vector<int> retained_y;
  FusionMethod method = FusionMethod::kMedian;
};

/// Per-coordinate median of the AP means. Odd L takes the variance of the
/// selected AP; even L averages the two middle means and uses
/// (v_a + v_b) / 4. Ties resolve to the lowest AP index.
FusionResult fuse_median(std::span<const PositionEstimate> estimates);

/// Arithmetic mean of the means with variance sum(v) / L^2.
FusionResult fuse_mean(std::span<const PositionEstimate> estimates);

/// Precision-weighted product of Gaussians: v = (sum 1/v_l)^-1, mu = v sum mu_l / v_l.
FusionResult fuse_bayesian(std::span<const PositionEstimate> estimates);

/// Drops APs whose mean has |z| >= threshold (population std over the L
/// means) and applies Bayesian fusion to the rest. An empty retained set or
/// zero spread falls back to retaining every AP.
FusionResult fuse_zscore(std::span<const PositionEstimate> estimates, double threshold = kDefaultZScoreThreshold);

FusionResult fuse(FusionMethod method, std::span<const PositionEstimate> estimates,
                  double zscore_threshold = kDefaultZScoreThreshold);

}  // namespace cfloc
