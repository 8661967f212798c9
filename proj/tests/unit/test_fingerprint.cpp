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
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cfloc/errors.hpp"
#include "cfloc/fingerprint.hpp"
#include "cfloc/geometry.hpp"
#include "doctest.h"

using namespace cfloc;

namespace {

ArrayModel model(int n, double spread_deg, double noise) {
  ArrayModel m;
  m.num_antennas = n;
  m.angular_spread_deg = spread_deg;
  m.tx_power_mw = 100.0;
  m.noise_power_mw = noise;
  return m;
}

double sd(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("estimate_rss_db normalises by transmit power") {
  std::vector<SignalBlock> blocks(3, SignalBlock::Zero(4, 1));
  for (auto& b : blocks) b(0, 0) = std::sqrt(100.0);
  CHECK(estimate_rss_db(blocks, 100.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(estimate_rss_db(std::vector<SignalBlock>{}, 1.0), NumericError);
  CHECK_THROWS_AS(estimate_rss_db(std::vector<SignalBlock>(2, SignalBlock::Zero(4, 1)), 1.0), NumericError);
}

TEST_CASE("RSS converges to the expected received energy") {
  const auto m = model(8, 10.0, 1e-6);
  const double beta = 1e-8;
  const auto stats = make_channel_stats(beta, 40.0, m);
  Rng rng(8);
  const auto y = sample_received_signal(stats, m, 20000, rng);
  const double want = 10.0 * std::log10(8 * beta + 8 * 1e-6 / 100.0);
  CHECK(std::abs(estimate_rss_db(y, 100.0) - want) < 0.05);
}

TEST_CASE("RSS spread shrinks as one over the square root of the sample count") {
  const auto m = model(8, 10.0, 1e-9);
  const auto stats = make_channel_stats(1e-8, 40.0, m);
  std::vector<double> small, large;
  for (std::uint64_t r = 0; r < 300; ++r) {
    Rng a(1000 + r), b(5000 + r);
    small.push_back(estimate_rss_db(sample_received_signal(stats, m, 50, a), 100.0));
    large.push_back(estimate_rss_db(sample_received_signal(stats, m, 200, b), 100.0));
  }
  const double ratio = sd(small) / sd(large);
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.5);
}

TEST_CASE("offline AOA noise") {
  Rng rng(4);
  CHECK(offline_aoa_deg({0, 0}, {1, 1}, 0.0, rng) == doctest::Approx(45.0));
  const int draws = 100000;
  double s2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double e = offline_aoa_deg({0, 0}, {1, 1}, 2.0, rng) - 45.0;
    s2 += e * e;
  }
  CHECK(s2 / draws == doctest::Approx(4.0).epsilon(0.05));
  for (int i = 0; i < 1000; ++i) {
    const double v = offline_aoa_deg({0, 0}, {-1, 0.001}, 2.0, rng);
    CHECK(v > -180.0);
    CHECK(v <= 180.0);
  }
}

TEST_CASE("MUSIC recovers a noiseless single path") {
  const MusicEstimator music(8, 0.5);
  std::vector<SignalBlock> y{steering_vector(60.0, 8, 0.5)};
  const auto r = music.estimate(y);
  CHECK_FALSE(r.degenerate);
  CHECK(std::abs(r.aoa_deg - 60.0) <= music.grid_step_deg());
  CHECK(std::abs(music_aoa_deg(y, 8, 0.5).aoa_deg - 60.0) <= 0.05);
}

TEST_CASE("MUSIC grid lies inside the open half circle") {
  const MusicEstimator music(4, 0.5, 0.05);
  CHECK(music.grid_deg().front() == doctest::Approx(0.05));
  CHECK(music.grid_deg().back() == doctest::Approx(179.95));
  CHECK(music.grid_deg().size() == 3599);
}

TEST_CASE("noise-subspace projection vanishes at the true angle") {
  const int n = 6;
  const CVector a = steering_vector(72.0, n, 0.5);
  const CMatrix r = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
  const CMatrix un = eig.eigenvectors().leftCols(n - 1);
  CHECK(music_denominator(un, 72.0, 0.5) < 1e-20);
  CHECK(music_denominator(un, 80.0, 0.5) > 1e-3);
}

TEST_CASE("rank-one shortcut equals the explicit noise subspace denominator") {
  const int n = 5;
  Rng rng(21);
  CMatrix x = CMatrix::Random(n, n);
  const CMatrix r = x * x.adjoint() + 3.0 * steering_vector(33.0, n, 0.5) * steering_vector(33.0, n, 0.5).adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
  const CMatrix un = eig.eigenvectors().leftCols(n - 1);
  const CVector u1 = eig.eigenvectors().col(n - 1);
  for (double th = 1.0; th < 180.0; th += 7.3) {
    const CVector a = steering_vector(th, n, 0.5);
    CHECK(music_denominator(un, th, 0.5) == doctest::Approx(n - std::norm(u1.dot(a))).epsilon(1e-10));
  }
}

TEST_CASE("identical eigenvalues are flagged as degenerate") {
  const MusicEstimator music(4, 0.5);
  CHECK(music.estimate_from_covariance(CMatrix::Identity(4, 4)).degenerate);
  CHECK_THROWS_AS(music.estimate_from_covariance(CMatrix::Identity(3, 3)), DomainError);
}

namespace {

double music_rmse(int n, double spread_deg, double snr_db, int trials) {
  const auto m = model(n, spread_deg, 1.0);
  const MusicEstimator music(n, 0.5);
  const auto stats = make_channel_stats(std::pow(10.0, snr_db / 10.0) / 100.0, 60.0, m);
  double s2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(100 * n + t));
    const auto y = sample_received_signal(stats, m, 200, rng);
    const double e = music.estimate(y).aoa_deg - 60.0;
    s2 += e * e;
  }
  return std::sqrt(s2 / trials);
}

}  // namespace

TEST_CASE("MUSIC error shrinks with more antennas when noise limited") {
  std::vector<double> rmse;
  for (int n : {9, 16, 25, 36}) rmse.push_back(music_rmse(n, 2.0, -10.0, 30));
  for (std::size_t i = 1; i < rmse.size(); ++i) CHECK(rmse[i] <= 1.1 * rmse[i - 1]);
  CHECK(rmse.back() < 0.5 * rmse.front());
}

// A wide scatter ring is resolved by a long array, so the sample principal
// eigenvector wanders across the ring instead of locking onto its centre.
TEST_CASE("MUSIC error grows with aperture when angular spread dominates") {
  CHECK(music_rmse(36, 10.0, 0.0, 30) > 2.0 * music_rmse(9, 10.0, 0.0, 30));
}

TEST_CASE("ULA ambiguity follows the reference half plane") {
  CHECK(resolve_ula_ambiguity(60.0, -59.0) == -60.0);
  CHECK(resolve_ula_ambiguity(60.0, 61.0) == 60.0);
}

TEST_CASE("fingerprint CSV round trip") {
  FingerprintDB db;
  db.ap_index = 3;
  db.rp_positions.resize(2, 2);
  db.rp_positions << 12.5, 12.5, 37.5, 12.5;
  db.rss_db.resize(2);
  db.rss_db << -91.234567891234, -100.1;
  db.aoa_deg.resize(2);
  db.aoa_deg << 179.99, -0.1;
  std::stringstream ss;
  write_fingerprint_csv(ss, db);
  const auto back = read_fingerprint_csv(ss, 3);
  CHECK(back.ap_index == 3);
  CHECK(back.rss_db == db.rss_db);
  CHECK(back.aoa_deg == db.aoa_deg);
  CHECK(back.rp_positions == db.rp_positions);
  CHECK(back.hybrid().col(0) == db.rss_db);
  CHECK(back.hybrid().col(1) == db.aoa_deg);
}

TEST_CASE("malformed fingerprint CSV reports the line") {
  std::stringstream ss("rp_index,x,y,rss_db,aoa_deg\n0,1,2,-90,10\n1,1,2,oops,10\n");
  try {
    read_fingerprint_csv(ss, 0);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::stringstream bad_header("rp,x,y,rss_db,aoa_deg\n");
  CHECK_THROWS_AS(read_fingerprint_csv(bad_header, 0), ParseError);
}
