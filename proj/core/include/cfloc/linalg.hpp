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

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace cfloc {

/// Cholesky factor together with the diagonal jitter that was needed.
struct JitteredCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

/// Factorises `a`; on failure retries with `a + jitter I`, starting at
/// `initial_jitter` and multiplying by 10 up to `max_escalations` times.
/// Throws NumericError if every attempt fails.
JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& a, double initial_jitter, int max_escalations);

}  // namespace cfloc
