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

#include "cfloc/crb.hpp"

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "cfloc/bessel.hpp"
#include "cfloc/errors.hpp"
#include "cfloc/geometry.hpp"

namespace cfloc {

CrbConfig CrbConfig::from(const ArrayModel& model, double beta_linear, double theta_deg, int num_measurements) {
  CrbConfig c;
  c.num_antennas = model.num_antennas;
  c.d_over_lambda = model.d_over_lambda;
  c.angular_spread_deg = model.angular_spread_deg;
  c.tx_power_mw = model.tx_power_mw;
  c.beta_linear = beta_linear;
  c.noise_power_mw = model.noise_power_mw;
  c.theta_deg = theta_deg;
  c.num_measurements = num_measurements;
  return c;
}

ArrayModel CrbConfig::array_model() const {
  ArrayModel m;
  m.num_antennas = num_antennas;
  m.d_over_lambda = d_over_lambda;
  m.angular_spread_deg = angular_spread_deg;
  m.tx_power_mw = tx_power_mw;
  m.noise_power_mw = noise_power_mw;
  return m;
}

CMatrix disk_covariance_derivative(const CrbConfig& cfg) {
  const int n = cfg.num_antennas;
  const double phi = deg_to_rad(cfg.theta_deg);
  const double spread = deg_to_rad(cfg.angular_spread_deg);
  const double zeta = 2.0 * kPi * cfg.d_over_lambda * spread * std::sin(phi);

  // d/dx [J0 + J2](x) = -(J1 + J3)(x) / 2 and dzeta/dphi = 2 pi (d/lambda) spread cos(phi).
  Eigen::VectorXd g(n), dg(n);
  for (int k = 0; k < n; ++k) {
    const auto j = bessel_j0123(k * zeta);
    g(k) = j[0] + j[2];
    dg(k) = -kPi * cfg.d_over_lambda * k * spread * std::cos(phi) * (j[1] + j[3]);
  }

  const CVector a = steering_vector(cfg.theta_deg, n, cfg.d_over_lambda);
  // a_n = exp(-j 2 pi (d/lambda) n cos(phi)) gives da_n/dphi = j 2 pi (d/lambda) sin(phi) n a_n.
  CVector da(n);
  const std::complex<double> c(0.0, 2.0 * kPi * cfg.d_over_lambda * std::sin(phi));
  for (int k = 0; k < n; ++k) da(k) = c * static_cast<double>(k) * a(k);

  const CMatrix aa = a * a.adjoint();
  const CMatrix daa = da * a.adjoint() + a * da.adjoint();
  CMatrix out(n, n);
  for (int m = 0; m < n; ++m) {
    for (int q = 0; q < n; ++q) {
      const int lag = std::abs(m - q);
      // G is even in the lag, so its derivative is too.
      out(m, q) = dg(lag) * aa(m, q) + g(lag) * daa(m, q);
    }
  }
  return (cfg.tx_power_mw * cfg.beta_linear) * out;
}

CrbResult crb_aoa_variance(const CrbConfig& cfg) {
  if (cfg.num_antennas < 2) throw DomainError("CRB needs at least two antennas");
  if (cfg.num_measurements < 1) throw DomainError("CRB needs at least one measurement");
  if (!(cfg.noise_power_mw > 0.0) || !(cfg.beta_linear >= 0.0)) throw DomainError("CRB: invalid power");
  const CMatrix r = disk_covariance(cfg.beta_linear, cfg.theta_deg, cfg.array_model());
  const CMatrix dr = disk_covariance_derivative(cfg);
  Eigen::LLT<CMatrix> llt(r);
  if (llt.info() != Eigen::Success) throw NumericError("CRB: covariance is not positive definite");
  const CMatrix m = llt.solve(dr);
  const double fisher = (m * m).trace().real();
  if (!(fisher > 0.0) || !std::isfinite(fisher)) throw NumericError("CRB: Fisher information is not positive");
  CrbResult out;
  out.fisher = fisher;
  out.var_rad2 = 1.0 / (static_cast<double>(cfg.num_measurements) * fisher);
  const double s = 180.0 / kPi;
  out.var_deg2 = out.var_rad2 * s * s;
  return out;
}

double crb_noised_aoa(double true_aoa_deg, double var_deg2, Rng& rng) {
  if (!(var_deg2 > 0.0)) throw DomainError("crb_noised_aoa: variance must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(var_deg2));
  return wrap_deg(true_aoa_deg + normal(rng));
}

}  // namespace cfloc
