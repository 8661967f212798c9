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
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "cfloc/channel.hpp"
#include "cfloc/fingerprint.hpp"
#include "cfloc/fusion.hpp"
#include "cfloc/gpr.hpp"

using namespace cfloc;

namespace {

void fill_problem(int k, int d, Eigen::MatrixXd& x, Eigen::VectorXd& y) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  x.resize(k, d);
  y.resize(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = n01(rng);
    y(i) = std::sin(2.0 * x(i, 0)) + std::cos(x(i, d - 1)) + 0.1 * n01(rng);
  }
}

void BM_GprFit(benchmark::State& state) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  fill_problem(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), x, y);
  for (auto _ : state) benchmark::DoNotOptimize(fit(x, y));
}
BENCHMARK(BM_GprFit)->Args({64, 2})->Args({225, 2})->Args({64, 18})->Unit(benchmark::kMillisecond);

void BM_GprPredict(benchmark::State& state) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  fill_problem(static_cast<int>(state.range(0)), 2, x, y);
  const GprModel model = GprModel::condition(x, y, Hyperparams{});
  const Eigen::RowVectorXd q = Eigen::RowVectorXd::Constant(2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(q));
}
BENCHMARK(BM_GprPredict)->Arg(64)->Arg(225);

void BM_SampleSignal(benchmark::State& state) {
  ArrayModel m;
  m.num_antennas = static_cast<int>(state.range(0));
  const auto stats = make_channel_stats(1e-3, 60.0, m);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_received_signal(stats, m, 200, rng));
}
BENCHMARK(BM_SampleSignal)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Music(benchmark::State& state) {
  ArrayModel m;
  m.num_antennas = static_cast<int>(state.range(0));
  const auto stats = make_channel_stats(1e-3, 60.0, m);
  Rng rng(3);
  const auto blocks = sample_received_signal(stats, m, 200, rng);
  const MusicEstimator music(m.num_antennas, m.d_over_lambda);
  for (auto _ : state) benchmark::DoNotOptimize(music.estimate(blocks));
}
BENCHMARK(BM_Music)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_Fuse(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1.0, 100.0);
  std::vector<PositionEstimate> es(static_cast<std::size_t>(state.range(1)));
  for (auto& e : es) e = {{u(rng), u(rng)}, u(rng), u(rng), ""};
  const auto method = static_cast<FusionMethod>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fuse(method, es, kDefaultZScoreThreshold));
}
BENCHMARK(BM_Fuse)->ArgsProduct({{0, 1, 2, 3}, {9, 25}});

}  // namespace

BENCHMARK_MAIN();
