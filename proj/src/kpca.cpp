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

#include "aed/kpca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace aed::kpca {

namespace {

constexpr double kRankCutoffRatio = 1e-10;   // lambda below this x lambda_1 is unusable
constexpr double kPsdTolerance = -1e-8;      // centered kernel must stay PSD
constexpr double kNegativeErrorClamp = 1e-9; // round-off allowance on R

// Kernel row of z against every training feature: kappa(z, F_i).
Eigen::VectorXd kernel_against_training(const Model& model, const Eigen::VectorXd& z) {
  if (z.size() != model.train_features.rows())
    throw Error("kpca: feature length " + std::to_string(z.size()) +
                " does not match training length " +
                std::to_string(model.train_features.rows()));
  const int n = model.sample_count();
  Eigen::VectorXd row(n);
  for (int i = 0; i < n; ++i)
    row[i] = gaussian_kernel(model.train_features.col(i), z, model.sigma);
  return row;
}

}  // namespace

double gaussian_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma) {
  if (a.size() != b.size())
    throw Error("gaussian_kernel: feature lengths differ (" + std::to_string(a.size()) +
                " vs " + std::to_string(b.size()) + ")");
  if (sigma <= 0.0) throw Error("gaussian_kernel: sigma must be positive");
  return std::exp(-(a - b).squaredNorm() / (2.0 * sigma * sigma));
}

Eigen::MatrixXd center_kernel(const Eigen::MatrixXd& kernel) {
  if (kernel.rows() != kernel.cols()) throw Error("center_kernel: matrix must be square");
  const Eigen::Index n = kernel.rows();
  const Eigen::VectorXd row_means = kernel.rowwise().mean();
  const Eigen::VectorXd col_means = kernel.colwise().mean();
  const double grand = kernel.mean();
  Eigen::MatrixXd centered(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      centered(i, j) = kernel(i, j) - row_means[i] - col_means[j] + grand;
  return centered;
}

Model fit(const Eigen::MatrixXd& features, const Hyper& hyper) {
  const int n = static_cast<int>(features.cols());
  if (n < 2) throw Error("kpca::fit: need at least 2 training features");
  if (hyper.sigma <= 0.0) throw Error("kpca::fit: sigma must be positive");
  if (hyper.q < 1) throw Error("kpca::fit: q must be >= 1");
  if (hyper.q > n - 1)
    throw Error("kpca::fit: q = " + std::to_string(hyper.q) +
                " exceeds the centered-kernel rank bound; achievable maximum is N-1 = " +
                std::to_string(n - 1));

  // Pairwise squared distances through the Gram product: one matrix product
  // instead of N^2/2 column traversals. The diagonal of the Gram matrix
  // supplies the norms, so kappa(F_i, F_i) is exactly 1, and the upper
  // triangle is mirrored so V is exactly symmetric.
  const Eigen::MatrixXd gram = features.transpose() * features;
  const double inv_two_sigma_sq = 1.0 / (2.0 * hyper.sigma * hyper.sigma);
  Eigen::MatrixXd kernel(n, n);
  for (int i = 0; i < n; ++i) {
    kernel(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double dist_sq = std::max(0.0, gram(i, i) + gram(j, j) - 2.0 * gram(i, j));
      const double k = std::exp(-dist_sq * inv_two_sigma_sq);
      kernel(i, j) = k;
      kernel(j, i) = k;
    }
  }

  const Eigen::MatrixXd centered = center_kernel(kernel);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);
  if (solver.info() != Eigen::Success) throw Error("kpca::fit: eigendecomposition failed");

  if (solver.eigenvalues()[0] < kPsdTolerance)
    throw Error("kpca::fit: centered kernel has eigenvalue " +
                std::to_string(solver.eigenvalues()[0]) +
                "; kernel matrix is not positive semidefinite");

  // Usable rank: strictly positive eigenvalues above the relative cutoff.
  const double lambda_max = solver.eigenvalues()[n - 1];
  int rank = 0;
  for (int i = n - 1; i >= 0; --i) {
    const double lambda = solver.eigenvalues()[i];
    if (lambda > 0.0 && lambda >= kRankCutoffRatio * lambda_max)
      ++rank;
    else
      break;
  }
  if (rank == 0)
    throw DegenerateInputError(
        "kpca::fit: centered kernel has no positive eigenvalues "
        "(all training features identical?)");
  if (hyper.q > rank)
    throw Error("kpca::fit: q = " + std::to_string(hyper.q) +
                " exceeds the usable rank; achievable maximum is " + std::to_string(rank));

  Model model;
  model.train_features = features;
  model.sigma = hyper.sigma;
  model.q = hyper.q;
  model.col_means = kernel.rowwise().mean();
  model.grand_mean = kernel.mean();
  model.alphas.resize(n, hyper.q);
  model.lambdas.resize(hyper.q);
  for (int j = 0; j < hyper.q; ++j) {
    const int src = n - 1 - j;
    const double lambda = solver.eigenvalues()[src];
    Eigen::VectorXd alpha = solver.eigenvectors().col(src);
    // Deterministic sign, then scale so lambda * ||alpha||^2 = 1: the
    // feature-space direction W_j becomes unit norm, making the
    // reconstruction error a valid squared residual.
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(alpha[i]) > std::abs(alpha[best])) best = i;
    if (alpha[best] < 0.0) alpha = -alpha;
    model.alphas.col(j) = alpha / std::sqrt(lambda);
    model.lambdas[j] = lambda;
  }

  model.threshold = 0.0;
  for (int i = 0; i < n; ++i)
    model.threshold = std::max(model.threshold,
                               reconstruction_error(model, features.col(i)));
  return model;
}

namespace {

// Centered cross-kernel of z against each training feature:
// kappa(z,F_i) - col_mean_i - mean_b kappa(z,F_b) + grand_mean.
Eigen::VectorXd centered_cross_kernel(const Model& model, const Eigen::VectorXd& row) {
  return row.array() - model.col_means.array() - row.mean() + model.grand_mean;
}

}  // namespace

Eigen::VectorXd project(const Model& model, const Eigen::VectorXd& z) {
  const Eigen::VectorXd row = kernel_against_training(model, z);
  return model.alphas.transpose() * centered_cross_kernel(model, row);
}

double reconstruction_error(const Model& model, const Eigen::VectorXd& z) {
  const Eigen::VectorXd row = kernel_against_training(model, z);
  const double z_mean = row.mean();
  const Eigen::VectorXd projections =
      model.alphas.transpose() * centered_cross_kernel(model, row);
  const double potential = 1.0 - 2.0 * z_mean + model.grand_mean;
  const double error = potential - projections.squaredNorm();
  if (error < -kNegativeErrorClamp)
    throw Error("kpca: reconstruction error " + std::to_string(error) +
                " is negative beyond round-off; eigensystem is inconsistent");
  return std::max(0.0, error);
}

Classification classify(const Model& model, const Eigen::VectorXd& z) {
  const double score = reconstruction_error(model, z);
  return Classification{score > model.threshold ? Decision::anomaly : Decision::normal, score};
}

}  // namespace aed::kpca
