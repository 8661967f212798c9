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

#include "cfloc/channel.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cfloc/bessel.hpp"
#include "cfloc/geometry.hpp"

namespace cfloc {

ArrayModel ArrayModel::from(const ScenarioConfig& cfg) {
  ArrayModel m;
  m.num_antennas = cfg.num_antennas;
  m.d_over_lambda = cfg.antenna_spacing_wavelengths;
  m.angular_spread_deg = cfg.angular_spread_deg;
  m.tx_power_mw = cfg.tx_power_mw;
  m.noise_power_mw = cfg.noise_power_mw();
  m.scattering_paths = cfg.scattering_paths;
  m.pilot_length = cfg.pilot_length;
  return m;
}

CVector steering_vector(double theta_deg, int num_antennas, double d_over_lambda) {
  CVector a(num_antennas);
  const double phase = -2.0 * kPi * d_over_lambda * std::cos(deg_to_rad(theta_deg));
  for (int n = 0; n < num_antennas; ++n) a(n) = std::polar(1.0, phase * n);
  return a;
}

Eigen::MatrixXd disk_scaling_matrix(double theta_deg, int num_antennas, double d_over_lambda,
                                    double angular_spread_deg) {
  const double zeta =
      2.0 * kPi * d_over_lambda * deg_to_rad(angular_spread_deg) * std::sin(deg_to_rad(theta_deg));
  Eigen::VectorXd g(num_antennas);
  for (int k = 0; k < num_antennas; ++k) {
    const auto j = bessel_j0123(k * zeta);
    g(k) = j[0] + j[2];
  }
  Eigen::MatrixXd out(num_antennas, num_antennas);
  for (int m = 0; m < num_antennas; ++m)
    for (int n = 0; n < num_antennas; ++n) out(m, n) = g(std::abs(m - n));
  return out;
}

CMatrix disk_covariance(double beta_linear, double theta_deg, const ArrayModel& model) {
  const int n = model.num_antennas;
  const CVector a = steering_vector(theta_deg, n, model.d_over_lambda);
  const Eigen::MatrixXd g = disk_scaling_matrix(theta_deg, n, model.d_over_lambda, model.angular_spread_deg);
  CMatrix r = (model.tx_power_mw * beta_linear) * (g.cast<std::complex<double>>().array() *
                                                   (a * a.adjoint()).array())
                                                      .matrix();
  r.diagonal().array() += model.noise_power_mw;
  return r;
}

ChannelStats make_channel_stats(double beta_linear, double theta_deg, const ArrayModel& model) {
  return {beta_linear, theta_deg, disk_covariance(beta_linear, theta_deg, model)};
}

double sample_disk_offset_rad(double angular_spread_rad, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double r = std::sqrt(u01(rng));
  const double psi = 2.0 * kPi * u01(rng);
  return angular_spread_rad * r * std::cos(psi);
}

CVector sample_channel(const ChannelStats& stats, const ArrayModel& model, Rng& rng) {
  const int n = model.num_antennas;
  const int paths = model.scattering_paths;
  const double spread = deg_to_rad(model.angular_spread_deg);
  const double nominal = deg_to_rad(stats.nominal_aoa_deg);
  const double k = -2.0 * kPi * model.d_over_lambda;
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  // Real arithmetic avoids the NaN-recovery path of std::complex multiplication.
  std::vector<double> hr(static_cast<std::size_t>(n), 0.0), hi(static_cast<std::size_t>(n), 0.0);
  for (int m = 0; m < paths; ++m) {
    const double theta = nominal + sample_disk_offset_rad(spread, rng);
    double cr = normal(rng);
    double ci = normal(rng);
    const double phase = k * std::cos(theta);
    const double sr = std::cos(phase);
    const double si = std::sin(phase);
    for (std::size_t i = 0; i < hr.size(); ++i) {
      hr[i] += cr;
      hi[i] += ci;
      const double t = cr * sr - ci * si;
      ci = cr * si + ci * sr;
      cr = t;
    }
  }
  CVector h(n);
  for (int i = 0; i < n; ++i) h(i) = {hr[static_cast<std::size_t>(i)], hi[static_cast<std::size_t>(i)]};
  return h * std::sqrt(stats.beta_linear / paths);
}

std::vector<SignalBlock> sample_received_signal(const ChannelStats& stats, const ArrayModel& model,
                                                int num_blocks, Rng& rng) {
  const int n = model.num_antennas;
  const int z = model.pilot_length;
  const double sqrt_rho = std::sqrt(model.tx_power_mw);
  std::normal_distribution<double> noise(0.0, std::sqrt(model.noise_power_mw / 2.0));
  std::vector<SignalBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(num_blocks));
  for (int s = 0; s < num_blocks; ++s) {
    const CVector h = sample_channel(stats, model, rng);
    SignalBlock y(n, z);
    for (int c = 0; c < z; ++c) {
      for (int i = 0; i < n; ++i) {
        const double re = noise(rng);
        const double im = noise(rng);
        y(i, c) = sqrt_rho * h(i) + std::complex<double>(re, im);
      }
    }
    blocks.push_back(std::move(y));
  }
  return blocks;
}

}  // namespace cfloc
