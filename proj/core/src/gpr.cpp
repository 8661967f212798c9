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

#include "cfloc/gpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "cfloc/errors.hpp"

namespace cfloc {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const auto k = x.rows();
  Eigen::MatrixXd d2(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    d2(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) d2(i, j) = d2(j, i) = (x.row(i) - x.row(j)).squaredNorm();
  }
  return d2;
}

// Kernel-part covariance from precomputed squared distances.
Eigen::MatrixXd se_from_d2(const Eigen::MatrixXd& d2, const Hyperparams& h) {
  return h.signal_var * (d2.array() * (-0.5 / h.length_scale)).exp().matrix();
}

struct Factorization {
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
  double jitter = 0.0;
};

Factorization factorize(const Eigen::MatrixXd& kf, double noise_var, const Eigen::VectorXd& y,
                        const GprOptions& opt) {
  Eigen::MatrixXd kt = kf;
  kt.diagonal().array() += noise_var;
  Factorization f;
  f.llt.compute(kt);
  if (f.llt.info() != Eigen::Success) {
    const double base = opt.jitter_rel * kt.trace() / static_cast<double>(kt.rows());
    double jitter = base;
    bool ok = false;
    for (int i = 0; i <= opt.jitter_escalations && !ok; ++i, jitter *= 10.0) {
      Eigen::MatrixXd kj = kt;
      kj.diagonal().array() += jitter;
      f.llt.compute(kj);
      if (f.llt.info() == Eigen::Success) {
        f.jitter = jitter;
        ok = true;
      }
    }
    if (!ok) throw TrainingError("kernel matrix is not positive definite after jitter escalation");
  }
  f.alpha = f.llt.solve(y);
  return f;
}

double lml_from(const Factorization& f, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd& l = f.llt.matrixLLT();
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  return -0.5 * y.dot(f.alpha) - 0.5 * logdet - 0.5 * static_cast<double>(y.size()) * kLog2Pi;
}

Eigen::Vector3d grad_from(const Factorization& f, const Eigen::MatrixXd& kf, const Eigen::MatrixXd& d2,
                          const Hyperparams& h) {
  const auto k = kf.rows();
  Eigen::MatrixXd w = f.alpha * f.alpha.transpose();
  w -= f.llt.solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::Vector3d g;
  // dK~/d log b^2 = Kf
  g(0) = 0.5 * (w.array() * kf.array()).sum();
  // dK~/d log rho = Kf .* D2 / (2 rho)
  g(1) = 0.5 * (w.array() * kf.array() * d2.array()).sum() / (2.0 * h.length_scale);
  // dK~/d log sigma^2 = sigma^2 I
  g(2) = 0.5 * h.noise_var * w.trace();
  return g;
}

void check_shapes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw DomainError("GPR: inputs and targets have different row counts");
  if (x.rows() == 0) throw DomainError("GPR: empty training set");
  if (!x.allFinite() || !y.allFinite()) throw DomainError("GPR: non-finite training data");
}

double variance(const Eigen::VectorXd& y) {
  const double m = y.mean();
  return (y.array() - m).square().sum() / static_cast<double>(y.size());
}

}  // namespace

Eigen::Vector3d Hyperparams::to_log() const {
  return {std::log(signal_var), std::log(length_scale), std::log(noise_var)};
}

Hyperparams Hyperparams::from_log(const Eigen::Vector3d& p) {
  return {std::exp(p(0)), std::exp(p(1)), std::exp(p(2))};
}

double kernel(const Eigen::Ref<const Eigen::RowVectorXd>& r, const Eigen::Ref<const Eigen::RowVectorXd>& r2,
              const Hyperparams& h) {
  return h.signal_var * std::exp(-(r - r2).squaredNorm() / (2.0 * h.length_scale));
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Hyperparams& h) {
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) k(i, j) = kernel(a.row(i), b.row(j), h);
  return k;
}

InputScaler InputScaler::fit(const Eigen::MatrixXd& x) {
  InputScaler s;
  s.mean = x.colwise().mean();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().mean();
    s.scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

InputScaler InputScaler::identity(Eigen::Index dims) {
  return {Eigen::RowVectorXd::Zero(dims), Eigen::RowVectorXd::Ones(dims)};
}

Eigen::MatrixXd InputScaler::transform(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

Eigen::RowVectorXd InputScaler::transform_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  return (row - mean).array() / scale.array();
}

double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Hyperparams& h,
                               const GprOptions& opt) {
  check_shapes(x, y);
  const Eigen::MatrixXd kf = se_from_d2(squared_distances(x), h);
  return lml_from(factorize(kf, h.noise_var, y, opt), y);
}

Eigen::Vector3d grad_log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                             const Hyperparams& h, const GprOptions& opt) {
  check_shapes(x, y);
  const Eigen::MatrixXd d2 = squared_distances(x);
  const Eigen::MatrixXd kf = se_from_d2(d2, h);
  return grad_from(factorize(kf, h.noise_var, y, opt), kf, d2, h);
}

GprModel GprModel::condition(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                             const Hyperparams& hyper, const GprOptions& options) {
  check_shapes(inputs, targets);
  GprModel m;
  m.hyper_ = hyper;
  m.options_ = options;
  m.scaler_ = options.standardize_inputs ? InputScaler::fit(inputs) : InputScaler::identity(inputs.cols());
  m.inputs_ = m.scaler_.transform(inputs);
  m.target_mean_ = options.center_targets ? targets.mean() : 0.0;
  const Eigen::VectorXd y = targets.array() - m.target_mean_;
  const Eigen::MatrixXd kf = se_from_d2(squared_distances(m.inputs_), hyper);
  const Factorization f = factorize(kf, hyper.noise_var, y, options);
  m.chol_ = f.llt.matrixL();
  m.alpha_ = f.alpha;
  m.jitter_ = f.jitter;
  return m;
}

GaussianPrediction GprModel::predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const {
  if (input.size() != inputs_.cols()) throw DomainError("GPR predict: input dimension mismatch");
  const Eigen::RowVectorXd x = scaler_.transform_row(input);
  Eigen::VectorXd k(inputs_.rows());
  for (Eigen::Index i = 0; i < inputs_.rows(); ++i) k(i) = kernel(inputs_.row(i), x, hyper_);
  GaussianPrediction p;
  p.mean = k.dot(alpha_) + target_mean_;
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
  p.var = std::max(options_.var_floor, hyper_.signal_var - v.squaredNorm());
  return p;
}

GprModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const TrainConfig& cfg) {
  check_shapes(inputs, targets);
  if (inputs.rows() < 2) throw DomainError("GPR fit needs at least two training points");
  const GprOptions& opt = cfg.options;
  const InputScaler scaler = opt.standardize_inputs ? InputScaler::fit(inputs) : InputScaler::identity(inputs.cols());
  const Eigen::MatrixXd x = scaler.transform(inputs);
  const double tmean = opt.center_targets ? targets.mean() : 0.0;
  const Eigen::VectorXd y = targets.array() - tmean;
  const Eigen::MatrixXd d2 = squared_distances(x);

  struct Eval {
    double lml = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd kf;
    Factorization f;
  };
  auto evaluate = [&](const Eigen::Vector3d& z) {
    Eval e;
    const Hyperparams h = Hyperparams::from_log(z);
    e.kf = se_from_d2(d2, h);
    try {
      e.f = factorize(e.kf, h.noise_var, y, opt);
      e.lml = lml_from(e.f, y);
      if (!std::isfinite(e.lml)) e.lml = -std::numeric_limits<double>::infinity();
    } catch (const TrainingError&) {
      e.lml = -std::numeric_limits<double>::infinity();
    }
    return e;
  };

  Eigen::Vector3d z;
  if (cfg.init) {
    z = cfg.init->to_log();
  } else {
    double var_y = variance(y);
    if (!(var_y > 0.0)) var_y = 1.0;
    z << std::log(var_y), std::log(static_cast<double>(x.cols())), std::log(0.1 * var_y);
  }
  Eval cur = evaluate(z);
  if (!std::isfinite(cur.lml) && !cfg.init) {
    // median heuristic for the length scale
    std::vector<double> d;
    for (Eigen::Index i = 0; i < d2.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j) d.push_back(d2(i, j));
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
    const double med = d[d.size() / 2];
    z(1) = std::log(med > 0.0 ? med : 1.0);
    cur = evaluate(z);
  }
  if (!std::isfinite(cur.lml)) throw TrainingError("GPR fit: likelihood is not finite at the initial point");

  TrainDiagnostics diag;
  diag.initial_lml = cur.lml;
  diag.lml_history.push_back(cur.lml);
  const double bound = cfg.log_param_bound;
  int stall = 0;
  Eigen::Vector3d grad = grad_from(cur.f, cur.kf, d2, Hyperparams::from_log(z));
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    if (grad.norm() < cfg.grad_tol) {
      diag.converged = true;
      diag.stop_reason = "gradient norm below tolerance";
      break;
    }
    double step = cfg.learning_rate;
    bool accepted = false;
    Eigen::Vector3d cand;
    Eval next;
    for (int h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
      cand = (z + step * grad).cwiseMax(-bound).cwiseMin(bound);
      next = evaluate(cand);
      if (next.lml >= cur.lml) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      diag.converged = true;
      diag.stop_reason = "no ascent step found";
      break;
    }
    const double gain = next.lml - cur.lml;
    z = cand;
    cur = std::move(next);
    diag.lml_history.push_back(cur.lml);
    grad = grad_from(cur.f, cur.kf, d2, Hyperparams::from_log(z));
    stall = gain <= cfg.lml_rel_tol * (1.0 + std::abs(cur.lml)) ? stall + 1 : 0;
    if (stall >= cfg.stall_iters) {
      ++it;
      diag.converged = true;
      diag.stop_reason = "likelihood change below tolerance";
      break;
    }
  }
  if (it >= cfg.max_iters && diag.stop_reason.empty()) diag.stop_reason = "max iterations reached";

  const Hyperparams best = Hyperparams::from_log(z);
  GprModel m;
  m.hyper_ = best;
  m.options_ = opt;
  m.scaler_ = scaler;
  m.inputs_ = x;
  m.target_mean_ = tmean;
  m.chol_ = cur.f.llt.matrixL();
  m.alpha_ = cur.f.alpha;
  m.jitter_ = cur.f.jitter;
  diag.iterations = it;
  diag.final_lml = cur.lml;
  diag.grad_norm = grad.norm();
  diag.jitter = cur.f.jitter;
  m.diag_ = diag;
  return m;
}

}  // namespace cfloc
