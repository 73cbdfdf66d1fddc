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
#include <cstdint>
#include <vector>

#include "aed/image.hpp"

namespace aed::pcanet {

/// Two-stage network hyperparameters. Filters are k1 x k2 (odd so same-size
/// zero padding is symmetric); l1/l2 filters per stage; histogram blocks are
/// non-overlapping block_h x block_w tiles.
struct Hyper {
  int k1 = 3;
  int k2 = 3;
  int l1 = 8;
  int l2 = 8;
  int block_h = 8;
  int block_w = 8;
  bool lrn_enabled = false;
};

/// Divisive normalization across adjacent feature maps at one spatial
/// position: q_i = p_i / (bias + weight * sum_{j in nb(i,depth)} p_j^2)^exponent.
struct LrnParams {
  double bias = 2.0;
  double weight = 1e-4;
  int depth = 5;
  double exponent = 0.75;
};

/// Vectorized patches: one column per patch, patch_dim rows
/// (channel-major, then row-major inside each channel).
using PatchMatrix = Eigen::MatrixXd;

/// Learned convolution kernels for one stage: column l of `filters` is the
/// vectorized l-th kernel; eigenvalues are the matching patch-covariance
/// eigenvalues, descending. Columns are pairwise orthonormal.
struct FilterBank {
  int stage = 0;      // 1 or 2
  int k1 = 0;
  int k2 = 0;
  int channels = 0;
  Eigen::MatrixXd filters;      // (k1*k2*channels) x L
  Eigen::VectorXd eigenvalues;  // L, non-increasing

  int count() const { return static_cast<int>(filters.cols()); }
};

/// Integer map produced by binarizing and bit-packing one stage-1 map's
/// stage-2 outputs; values lie in [0, 2^l2 - 1].
struct EncodedMap {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> values;  // row-major

  std::uint32_t at(int y, int x) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

/// Concatenated block histograms, length (2^l2) * l1 * B.
using FeatureVector = Eigen::VectorXd;

/// Trained extractor: both filter banks plus the geometry they expect.
struct Model {
  Hyper hyper;
  LrnParams lrn;
  FilterBank bank1;
  FilterBank bank2;
  int input_height = 0;
  int input_width = 0;
  int input_channels = 0;
};

/// Dense stride-1 sliding-window sampling, no padding. Columns are ordered
/// row-major by patch top-left corner.
PatchMatrix extract_patches(const Image& map, int k1, int k2);

/// Subtracts each column's own mean from that column.
PatchMatrix remove_patch_mean(PatchMatrix patches);

/// Top-`count` eigenvectors of patches * patches^T, reshaped to filters.
/// Sign convention: each filter's largest-magnitude entry is made positive.
/// `patches` must already be mean-removed.
FilterBank learn_filters(const PatchMatrix& patches, int count, int k1, int k2, int channels);

/// Same as learn_filters but from a precomputed patch covariance; lets
/// training accumulate covariance per map instead of pooling giant matrices.
FilterBank learn_filters_from_covariance(const Eigen::MatrixXd& covariance, int count,
                                         int k1, int k2, int channels);

/// Cross-correlation (no kernel flip) with zero padding to the input size.
/// Multichannel filters sum over channels. Outputs are grouped per input map
/// with the bank's filters in order, so the result has L x maps.size() grids.
std::vector<Grid> convolve_bank(const std::vector<Image>& maps, const FilterBank& bank);

/// Single-input convenience overload; returns the bank's L response maps.
std::vector<Grid> convolve_map(const Image& map, const FilterBank& bank);

/// Applies LRN across a group of maps indexed in filter order.
std::vector<Grid> lrn_normalize(const std::vector<Grid>& maps, const LrnParams& params);

/// T = sum_m 2^(m-1) * H(O_m), Heaviside H(x) = 1 for x > 0 else 0.
/// When expected_count >= 0, a differing map count is an error.
EncodedMap binarize_encode(const std::vector<Grid>& stage2_outputs, int expected_count = -1);

/// Raw per-block bin counts over the encoded map: B blocks row-major, each
/// contributing 2^l2 bins. Trailing partial blocks are kept.
std::vector<double> block_histogram_counts(const EncodedMap& encoded, const Hyper& hyper);

/// block_histogram_counts with every block's histogram L1-normalized by that
/// block's own pixel count.
std::vector<double> block_histogram(const EncodedMap& encoded, const Hyper& hyper);

/// Number of histogram blocks for an h x w map: ceil(h/bh) * ceil(w/bw).
int block_count(int height, int width, const Hyper& hyper);

/// Full feature length (2^l2) * l1 * B for an h x w input.
std::int64_t feature_length(int height, int width, const Hyper& hyper);

/// Learns both filter banks from the training maps (stage-1 patches pooled
/// over all maps; stage-2 patches pooled over all stage-1 responses, LRN'd
/// when enabled).
Model train(const std::vector<FlowMap>& maps, const Hyper& hyper, const LrnParams& lrn = {});

/// Forward pass: stage-1 convolution (+LRN) -> per response map stage-2
/// convolution (+LRN) -> binarize -> block histograms, concatenated in
/// stage-1 filter order.
FeatureVector extract_feature(const FlowMap& map, const Model& model);

}  // namespace aed::pcanet
