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

#include "cfloc/linalg.hpp"

#include <string>

#include "cfloc/errors.hpp"

namespace cfloc {

JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& a, double initial_jitter, int max_escalations) {
  JitteredCholesky out;
  out.llt.compute(a);
  if (out.llt.info() == Eigen::Success) return out;
  double jitter = initial_jitter;
  for (int i = 0; i <= max_escalations; ++i, jitter *= 10.0) {
    Eigen::MatrixXd b = a;
    b.diagonal().array() += jitter;
    out.llt.compute(b);
    if (out.llt.info() == Eigen::Success) {
      out.jitter = jitter;
      return out;
    }
  }
  throw NumericError("Cholesky factorisation failed after jitter " + std::to_string(jitter / 10.0));
}

}  // namespace cfloc
