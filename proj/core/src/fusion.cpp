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

#include "cfloc/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfloc/errors.hpp"

namespace cfloc {
namespace {

struct Coord {
  double mean;
  double var;
};

struct Fused {
  double mean;
  double var;
};

using Getter = Coord (*)(const PositionEstimate&);

Coord x_of(const PositionEstimate& e) { return {e.mean.x, e.var_x}; }
Coord y_of(const PositionEstimate& e) { return {e.mean.y, e.var_y}; }

void check(std::span<const PositionEstimate> es) {
  if (es.empty()) throw DomainError("fusion needs at least one estimate");
  for (const auto& e : es) {
    if (!(e.var_x > 0.0) || !(e.var_y > 0.0)) throw DomainError("fusion: estimate variances must be positive");
  }
}

Fused median_1d(std::span<const PositionEstimate> es, Getter get) {
  const std::size_t l = es.size();
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), 0);
  // Stable sort keeps the first AP index among equal means.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return get(es[a]).mean < get(es[b]).mean; });
  if (l % 2 == 1) {
    const Coord c = get(es[order[l / 2]]);
    return {c.mean, c.var};
  }
  const Coord a = get(es[order[l / 2 - 1]]);
  const Coord b = get(es[order[l / 2]]);
  return {0.5 * (a.mean + b.mean), (a.var + b.var) / 4.0};
}

Fused mean_1d(std::span<const PositionEstimate> es, Getter get) {
  const double l = static_cast<double>(es.size());
  double m = 0.0, v = 0.0;
  for (const auto& e : es) {
    const Coord c = get(e);
    m += c.mean;
    v += c.var;
  }
  return {m / l, v / (l * l)};
}

Fused bayes_1d(std::span<const PositionEstimate> es, Getter get, const std::vector<int>* subset) {
  double precision = 0.0, weighted = 0.0;
  auto add = [&](const PositionEstimate& e) {
    const Coord c = get(e);
    precision += 1.0 / c.var;
    weighted += c.mean / c.var;
  };
  if (subset) {
    for (int i : *subset) add(es[static_cast<std::size_t>(i)]);
  } else {
    for (const auto& e : es) add(e);
  }
  const double v = 1.0 / precision;
  return {v * weighted, v};
}

std::vector<int> zscore_retained(std::span<const PositionEstimate> es, Getter get, double threshold) {
  const double l = static_cast<double>(es.size());
  double mu = 0.0;
  for (const auto& e : es) mu += get(e).mean;
  mu /= l;
  double ss = 0.0;
  for (const auto& e : es) ss += (get(e).mean - mu) * (get(e).mean - mu);
  const double sigma = std::sqrt(ss / l);
  std::vector<int> all(es.size());
  std::iota(all.begin(), all.end(), 0);
  if (!(sigma > 0.0)) return all;
  std::vector<int> kept;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (std::abs((get(es[i]).mean - mu) / sigma) < threshold) kept.push_back(static_cast<int>(i));
  }
  return kept.empty() ? all : kept;
}

FusionResult assemble(FusionMethod m, Fused fx, Fused fy) {
  FusionResult r;
  r.method = m;
  r.estimate.mean = {fx.mean, fy.mean};
  r.estimate.var_x = fx.var;
  r.estimate.var_y = fy.var;
  r.estimate.source = std::string(to_string(m));
  return r;
}

}  // namespace

std::string_view to_string(FusionMethod m) {
  switch (m) {
    case FusionMethod::kMedian:
      return "median";
    case FusionMethod::kMean:
      return "mean";
    case FusionMethod::kBayesian:
      return "bayesian";
    case FusionMethod::kZScore:
      return "zscore";
  }
  return "unknown";
}

FusionMethod parse_fusion_method(std::string_view name) {
  if (name == "median") return FusionMethod::kMedian;
  if (name == "mean") return FusionMethod::kMean;
  if (name == "bayesian") return FusionMethod::kBayesian;
  if (name == "zscore") return FusionMethod::kZScore;
  throw ConfigError("method", "unknown fusion method '" + std::string(name) + "'");
}

FusionResult fuse_median(std::span<const PositionEstimate> es) {
  check(es);
  return assemble(FusionMethod::kMedian, median_1d(es, x_of), median_1d(es, y_of));
}

FusionResult fuse_mean(std::span<const PositionEstimate> es) {
  check(es);
  return assemble(FusionMethod::kMean, mean_1d(es, x_of), mean_1d(es, y_of));
}

FusionResult fuse_bayesian(std::span<const PositionEstimate> es) {
  check(es);
  return assemble(FusionMethod::kBayesian, bayes_1d(es, x_of, nullptr), bayes_1d(es, y_of, nullptr));
}

FusionResult fuse_zscore(std::span<const PositionEstimate> es, double threshold) {
  check(es);
  if (!(threshold > 0.0)) throw DomainError("z-score threshold must be positive");
  const auto kx = zscore_retained(es, x_of, threshold);
  const auto ky = zscore_retained(es, y_of, threshold);
  FusionResult r = assemble(FusionMethod::kZScore, bayes_1d(es, x_of, &kx), bayes_1d(es, y_of, &ky));
  r.retained_x = kx;
  r.retained_y = ky;
  return r;
}

FusionResult fuse(FusionMethod method, std::span<const PositionEstimate> es, double zscore_threshold) {
  switch (method) {
    case FusionMethod::kMedian:
      return fuse_median(es);
    case FusionMethod::kMean:
      return fuse_mean(es);
    case FusionMethod::kBayesian:
      return fuse_bayesian(es);
    case FusionMethod::kZScore:
      return fuse_zscore(es, zscore_threshold);
  }
  throw DomainError("unknown fusion method");
}

}  // namespace cfloc
