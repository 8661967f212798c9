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

#include <string>

#include "cfloc/geometry.hpp"

namespace cfloc {

/// Per-coordinate Gaussian position estimate.
struct PositionEstimate {
  Point2 mean;
  double var_x = 1.0;
  double var_y = 1.0;
  std::string source;  // AP index or fusion method tag
};

}  // namespace cfloc
