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

#include <array>

namespace cfloc {

/// Bessel function of the first kind J_n(x) for integer order n >= 0.
///
/// Small |x| uses the ascending power series; otherwise Miller's backward
/// recurrence normalised with J_0 + 2 sum J_2k = 1, which is stable for all
/// orders and arguments.
double bessel_j(int order, double x);

/// J_0(x) .. J_3(x) from a single recurrence pass.
std::array<double, 4> bessel_j0123(double x);

}  // namespace cfloc
