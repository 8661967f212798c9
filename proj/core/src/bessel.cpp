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

#include "cfloc/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cfloc {
namespace {

constexpr double kSeriesLimit = 1.0;

double series(int order, double x) {
  // sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= order; ++i) term *= half / i;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Fills out[0..max_order] with J_n(x), x != 0.
void miller(double x, int max_order, double* out) {
  const double ax = std::abs(x);
  const int start_base = std::max(max_order, static_cast<int>(ax)) + 20 +
                         static_cast<int>(std::sqrt(40.0 * std::max(max_order, static_cast<int>(ax)) + 40.0));
  const int start = start_base + (start_base % 2);  // even start keeps the normalisation sum aligned

  double next = 0.0;   // J_{k+1}
  double cur = 1e-300;  // J_k
  double norm = 0.0;
  std::vector<double> tmp(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / ax) * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    // rescale to avoid overflow
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (double& t : tmp) t *= 1e-250;
    }
    const int idx = k - 1;
    if (idx <= max_order) tmp[static_cast<std::size_t>(idx)] = cur;
    if (idx > 0 && idx % 2 == 0) norm += 2.0 * cur;
  }
  norm += cur;  // J_0 term
  for (int n = 0; n <= max_order; ++n) {
    double v = tmp[static_cast<std::size_t>(n)] / norm;
    if (x < 0.0 && (n % 2 == 1)) v = -v;
    out[n] = v;
  }
}

}  // namespace

double bessel_j(int order, double x) {
  if (order < 0) throw std::invalid_argument("bessel_j: negative order");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (std::abs(x) < kSeriesLimit) return series(order, x);
  std::vector<double> out(static_cast<std::size_t>(order) + 1);
  miller(x, order, out.data());
  return out[static_cast<std::size_t>(order)];
}

std::array<double, 4> bessel_j0123(double x) {
  std::array<double, 4> r{};
  if (x == 0.0) {
    r[0] = 1.0;
    return r;
  }
  if (std::abs(x) < kSeriesLimit) {
    for (int n = 0; n < 4; ++n) r[static_cast<std::size_t>(n)] = series(n, x);
    return r;
  }
  miller(x, 3, r.data());
  return r;
}

}  // namespace cfloc
