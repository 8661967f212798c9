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

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfloc {

using Rng = std::mt19937_64;

/// Purposes of independent random sub-streams. The numeric values are part of
/// the reproducibility contract: changing them changes every simulated draw.
enum class StreamTag : std::uint64_t {
  kScenario = 1,
  kRpShadow = 2,
  kRpSignal = 3,
  kOfflineAoa = 4,
  kTestShadow = 5,
  kTestSignal = 6,
  kTestAoa = 7,
  kShadowField = 8,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream split: the seed of a sub-stream depends only on the
/// master seed and the coordinates, never on the order streams are created in.
inline std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                 std::initializer_list<std::uint64_t> coords = {}) {
  std::uint64_t h = splitmix64(master ^ 0x6A09E667F3BCC909ULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  for (std::uint64_t c : coords) h = splitmix64(h ^ (c + 0x9E3779B97F4A7C15ULL));
  return h;
}

inline Rng make_stream(std::uint64_t master, StreamTag tag,
                       std::initializer_list<std::uint64_t> coords = {}) {
  return Rng(derive_seed(master, tag, coords));
}

/// Circularly-symmetric complex normal with E|w|^2 = variance.
inline std::complex<double> complex_normal(Rng& rng, double variance = 1.0) {
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace cfloc
