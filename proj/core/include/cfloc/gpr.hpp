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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cfloc {

/// Squared-exponential kernel hyperparameters for one coordinate model:
/// k(r, r') = signal_var * exp(-||r - r'||^2 / (2 length_scale)).
/// The length scale divides the squared distance directly.
struct Hyperparams {
  double signal_var = 1.0;
  double length_scale = 1.0;
  double noise_var = 0.1;

  Eigen::Vector3d to_log() const;
  static Hyperparams from_log(const Eigen::Vector3d& log_params);
};

double kernel(const Eigen::Ref<const Eigen::RowVectorXd>& r, const Eigen::Ref<const Eigen::RowVectorXd>& r2,
              const Hyperparams& hyper);

/// Cross-covariance matrix k(a_i, b_j).
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Hyperparams& hyper);

/// Per-dimension z-score transform. Zero-variance dimensions keep unit scale.
struct InputScaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static InputScaler fit(const Eigen::MatrixXd& inputs);
  static InputScaler identity(Eigen::Index dims);

  Eigen::MatrixXd transform(const Eigen::MatrixXd& inputs) const;
  Eigen::RowVectorXd transform_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

struct GprOptions {
  bool standardize_inputs = true;
  bool center_targets = true;
  double var_floor = 1e-9;
  double jitter_rel = 1e-10;  // times trace(K~)/K
  int jitter_escalations = 5;
};

struct TrainConfig {
  double learning_rate = 0.05;
  double grad_tol = 1e-4;
  int max_iters = 2000;
  /// Stop once the accepted likelihood gain stays below
  /// lml_rel_tol * (1 + |lml|) for `stall_iters` consecutive iterations.
  double lml_rel_tol = 1e-10;
  int stall_iters = 10;
  int max_halvings = 40;
  double log_param_bound = 25.0;
  GprOptions options;
  std::optional<Hyperparams> init;  // in the model's (standardised) units
};

struct TrainDiagnostics {
  int iterations = 0;
  double initial_lml = 0.0;
  double final_lml = 0.0;
  double grad_norm = 0.0;
  double jitter = 0.0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> lml_history;  // initial point and every accepted step
};

/// Log marginal likelihood -1/2 y^T K~^-1 y - 1/2 log det K~ - K/2 log 2 pi with
/// K~ = K(X, X) + noise_var I. Inputs and targets are used as given.
/// Throws TrainingError if K~ stays non-PD after jitter.
double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                               const Hyperparams& hyper, const GprOptions& options = {});

/// Gradient of the log marginal likelihood with respect to
/// (log signal_var, log length_scale, log noise_var), computed as
/// 1/2 tr((alpha alpha^T - K~^-1) dK~/dtheta).
Eigen::Vector3d grad_log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                             const Hyperparams& hyper, const GprOptions& options = {});

struct GaussianPrediction {
  double mean = 0.0;
  double var = 0.0;
};

/// A conditioned GP for one output coordinate. Immutable after construction.
class GprModel {
 public:
  /// Conditions the GP on (inputs, targets) with fixed hyperparameters.
  static GprModel condition(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                            const Hyperparams& hyper, const GprOptions& options = {});

  /// Posterior mean k^T alpha (+ target mean) and latent variance
  /// k(x, x) - k^T K~^-1 k, floored at options.var_floor.
  GaussianPrediction predict(const Eigen::Ref<const Eigen::RowVectorXd>& input) const;

  const Hyperparams& hyper() const { return hyper_; }
  const InputScaler& scaler() const { return scaler_; }
  const Eigen::MatrixXd& inputs() const { return inputs_; }  // standardised
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::MatrixXd& kernel_chol() const { return chol_; }
  double target_mean() const { return target_mean_; }
  double jitter() const { return jitter_; }
  Eigen::Index input_dims() const { return inputs_.cols(); }
  const TrainDiagnostics& diagnostics() const { return diag_; }

 private:
  friend GprModel fit(const Eigen::MatrixXd&, const Eigen::VectorXd&, const TrainConfig&);

  Hyperparams hyper_;
  GprOptions options_;
  InputScaler scaler_;
  Eigen::MatrixXd inputs_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double target_mean_ = 0.0;
  double jitter_ = 0.0;
  TrainDiagnostics diag_;
};

/// Learns hyperparameters by gradient ascent on the log marginal likelihood
/// in log-parameter space (backtracking halving on any decrease), then
/// conditions the model. Requires K >= 2.
GprModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const TrainConfig& config = {});

}  // namespace cfloc
