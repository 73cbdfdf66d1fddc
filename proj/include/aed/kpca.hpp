// Copyright 2026 The aedpipe Authors
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

#include <Eigen/Core>

#include "aed/error.hpp"

namespace aed {

/// Classification outcome shared by the classifier and the pipeline (frames
/// dropped by the foreground gate are reported as `skipped`).
enum class Decision { normal, anomaly, skipped };

namespace kpca {

/// Gaussian-kernel width and the number of retained eigenvectors.
struct Hyper {
  double sigma = 1.0;
  int q = 1;
};

/// Fitted one-class model. Columns of train_features are the N training
/// vectors; alphas column j is the eigenvector of the centered kernel matrix,
/// rescaled so lambda_j * ||alpha_j||^2 = 1 (unit-norm principal directions
/// in feature space). col_means / grand_mean come from the uncentered kernel.
struct Model {
  Eigen::MatrixXd train_features;  // dim x N
  double sigma = 0.0;
  int q = 0;
  Eigen::MatrixXd alphas;       // N x q
  Eigen::VectorXd lambdas;      // q, strictly positive, non-increasing
  Eigen::VectorXd col_means;    // N
  double grand_mean = 0.0;
  double threshold = 0.0;       // max training reconstruction error

  int sample_count() const { return static_cast<int>(train_features.cols()); }
  int feature_dim() const { return static_cast<int>(train_features.rows()); }
};

struct Classification {
  Decision decision;
  double score;  // reconstruction error, so callers can sweep thresholds
};

/// exp(-||a-b||^2 / (2 sigma^2)).
double gaussian_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma);

/// Double centering: V_ij - row_mean_i - col_mean_j + grand_mean.
Eigen::MatrixXd center_kernel(const Eigen::MatrixXd& kernel);

/// Fits the centered kernel eigensystem on normal features (columns) and
/// freezes the max-training-error threshold.
Model fit(const Eigen::MatrixXd& features, const Hyper& hyper);

/// Principal-component projections of z, length q.
Eigen::VectorXd project(const Model& model, const Eigen::VectorXd& z);

/// Feature-space reconstruction error of z; the anomaly score.
double reconstruction_error(const Model& model, const Eigen::VectorXd& z);

/// Anomaly iff the score strictly exceeds the trained threshold.
Classification classify(const Model& model, const Eigen::VectorXd& z);

}  // namespace kpca
}  // namespace aed
