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

// Test-only reference implementations: naive nested-loop versions of the
// feature pipeline and a from-scratch kernel-PCA evaluator. They are written
// against the documented contracts and share no code with the library paths
// they validate.

#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "aed/pcanet.hpp"

namespace aed::testref {

inline FlowMap random_map(int h, int w, int c, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  FlowMap map(h, w, c);
  for (int ch = 0; ch < c; ++ch)
    for (double& v : map.plane(ch).values()) v = uniform(rng);
  return map;
}

inline Eigen::MatrixXd random_features(int dim, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd f(dim, n);
  for (int i = 0; i < f.size(); ++i) f.data()[i] = gauss(rng);
  return f;
}

// Sinusoid with gradients in both axes; shift moves content right by s px.
inline GrayFrame sinusoid_frame(int h, int w, double period, double shift) {
  GrayFrame frame(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      frame.at(y, x) = 0.5 + 0.2 * std::sin(2.0 * M_PI * (x - shift) / period) +
                       0.2 * std::sin(2.0 * M_PI * y / period);
  return frame;
}

// Oracle: exhaustive integer-shift SSD alignment over the interior.
inline int best_integer_shift(const GrayFrame& prev, const GrayFrame& next, int max_shift) {
  int best = 0;
  double best_ssd = std::numeric_limits<double>::infinity();
  for (int k = -max_shift; k <= max_shift; ++k) {
    double ssd = 0.0;
    for (int y = 0; y < prev.height(); ++y)
      for (int x = max_shift; x < prev.width() - max_shift; ++x) {
        const double d = next.at(y, x) - prev.at(y, x - k);
        ssd += d * d;
      }
    if (ssd < best_ssd) {
      best_ssd = ssd;
      best = k;
    }
  }
  return best;
}

inline std::vector<double> naive_correlate(const std::vector<const Grid*>& planes,
                                           const Eigen::VectorXd& filter, int k1, int k2) {
  const int h = planes[0]->height();
  const int w = planes[0]->width();
  const int pad_y = (k1 - 1) / 2;
  const int pad_x = (k2 - 1) / 2;
  std::vector<double> out(static_cast<std::size_t>(h) * w, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::size_t c = 0; c < planes.size(); ++c)
        for (int a = 0; a < k1; ++a)
          for (int b = 0; b < k2; ++b) {
            const int yy = y + a - pad_y;
            const int xx = x + b - pad_x;
            if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
            acc += planes[c]->at(yy, xx) *
                   filter[(static_cast<Eigen::Index>(c) * k1 + a) * k2 + b];
          }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return out;
}

inline std::vector<std::vector<double>> naive_lrn(const std::vector<std::vector<double>>& maps,
                                                  const pcanet::LrnParams& p) {
  const int count = static_cast<int>(maps.size());
  std::vector<std::vector<double>> out(maps.size());
  for (int i = 0; i < count; ++i) {
    out[i].resize(maps[i].size());
    for (std::size_t px = 0; px < maps[i].size(); ++px) {
      double sum = 0.0;
      for (int j = std::max(0, i - p.depth / 2); j <= std::min(count - 1, i + p.depth / 2); ++j)
        sum += maps[j][px] * maps[j][px];
      out[i][px] = maps[i][px] / std::pow(p.bias + p.weight * sum, p.exponent);
    }
  }
  return out;
}

struct NaiveForward {
  std::vector<std::vector<std::uint32_t>> encoded;  // per stage-1 filter
  std::vector<std::vector<double>> counts;          // raw histogram counts
};

inline NaiveForward naive_forward(const FlowMap& map, const pcanet::Model& model) {
  const auto& hy = model.hyper;
  const int h = map.height();
  const int w = map.width();

  std::vector<const Grid*> planes;
  for (int c = 0; c < map.channels(); ++c) planes.push_back(&map.plane(c));

  std::vector<std::vector<double>> stage1;
  for (int l = 0; l < hy.l1; ++l)
    stage1.push_back(naive_correlate(planes, model.bank1.filters.col(l), hy.k1, hy.k2));
  if (hy.lrn_enabled) stage1 = naive_lrn(stage1, model.lrn);

  NaiveForward result;
  for (int l = 0; l < hy.l1; ++l) {
    Grid response(h, w);
    response.values() = stage1[l];
    std::vector<const Grid*> single{&response};
    std::vector<std::vector<double>> stage2;
    for (int m = 0; m < hy.l2; ++m)
      stage2.push_back(naive_correlate(single, model.bank2.filters.col(m), hy.k1, hy.k2));
    if (hy.lrn_enabled) stage2 = naive_lrn(stage2, model.lrn);

    std::vector<std::uint32_t> encoded(static_cast<std::size_t>(h) * w, 0);
    for (int m = 0; m < hy.l2; ++m)
      for (std::size_t px = 0; px < encoded.size(); ++px)
        if (stage2[m][px] > 0.0) encoded[px] += 1u << m;
    result.encoded.push_back(encoded);

    const int bins = 1 << hy.l2;
    const int by = (h + hy.block_h - 1) / hy.block_h;
    const int bx = (w + hy.block_w - 1) / hy.block_w;
    std::vector<double> counts(static_cast<std::size_t>(by) * bx * bins, 0.0);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const int block = (y / hy.block_h) * bx + (x / hy.block_w);
        counts[static_cast<std::size_t>(block) * bins +
               encoded[static_cast<std::size_t>(y) * w + x]] += 1.0;
      }
    result.counts.push_back(counts);
  }
  return result;
}

// From-scratch dense kernel-PCA scoring: rebuilds the kernel matrix, centers
// it, runs a fresh eigendecomposition, and evaluates the projection and
// reconstruction-error formulas directly.
inline double brute_reconstruction_error(const Eigen::MatrixXd& features, double sigma, int q,
                                         const Eigen::VectorXd& z) {
  const int n = static_cast<int>(features.cols());
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v(i, j) = std::exp(-(features.col(i) - features.col(j)).squaredNorm() /
                         (2.0 * sigma * sigma));

  const double grand = v.sum() / (static_cast<double>(n) * n);
  Eigen::VectorXd col_means(n);
  for (int i = 0; i < n; ++i) col_means[i] = v.row(i).sum() / n;

  Eigen::MatrixXd centered(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) centered(i, j) = v(i, j) - col_means[i] - col_means[j] + grand;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);

  Eigen::VectorXd kz(n);
  for (int i = 0; i < n; ++i)
    kz[i] = std::exp(-(features.col(i) - z).squaredNorm() / (2.0 * sigma * sigma));
  const double kz_mean = kz.sum() / n;

  double projected = 0.0;
  for (int j = 0; j < q; ++j) {
    const double lambda = solver.eigenvalues()[n - 1 - j];
    const Eigen::VectorXd alpha = solver.eigenvectors().col(n - 1 - j);
    double p = 0.0;
    for (int i = 0; i < n; ++i)
      p += alpha[i] / std::sqrt(lambda) * (kz[i] - col_means[i] - kz_mean + grand);
    projected += p * p;
  }
  return 1.0 - 2.0 * kz_mean + grand - projected;
}

}  // namespace aed::testref
