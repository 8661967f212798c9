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

#include <cmath>

#include "cfloc/bessel.hpp"
#include "doctest.h"

using cfloc::bessel_j;
using cfloc::bessel_j0123;

TEST_CASE("bessel_j agrees with the standard library over orders 0..6") {
  double worst = 0.0;
  for (int n = 0; n <= 6; ++n) {
    for (double x = 0.0; x <= 40.0; x += 0.0137) {
      const double ref = std::cyl_bessel_j(static_cast<double>(n), x);
      worst = std::max(worst, std::abs(bessel_j(n, x) - ref));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("bessel_j parity for negative arguments") {
  for (double x : {0.3, 1.7, 5.2, 17.9}) {
    CHECK(bessel_j(0, -x) == doctest::Approx(bessel_j(0, x)).epsilon(1e-15));
    CHECK(bessel_j(1, -x) == doctest::Approx(-bessel_j(1, x)).epsilon(1e-15));
    CHECK(bessel_j(2, -x) == doctest::Approx(bessel_j(2, x)).epsilon(1e-15));
    CHECK(bessel_j(3, -x) == doctest::Approx(-bessel_j(3, x)).epsilon(1e-15));
  }
}

TEST_CASE("bessel_j0123 matches the single-order routine") {
  for (double x : {0.0, 1e-8, 0.5, 0.999, 1.0, 3.3, 12.0, -6.1}) {
    const auto j = bessel_j0123(x);
    for (int n = 0; n < 4; ++n) CHECK(j[static_cast<std::size_t>(n)] == doctest::Approx(bessel_j(n, x)).epsilon(1e-14));
  }
}

TEST_CASE("bessel values at zero") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(2, 0.0) == 0.0);
  CHECK_THROWS(bessel_j(-1, 1.0));
}
