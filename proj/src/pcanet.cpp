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

#include "aed/pcanet.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace aed::pcanet {

namespace {

void validate_hyper(const Hyper& hyper, int channels) {
  if (hyper.k1 < 1 || hyper.k2 < 1 || hyper.k1 % 2 == 0 || hyper.k2 % 2 == 0)
    throw Error("pcanet: filter sizes k1, k2 must be positive odd integers");
  if (hyper.l1 < 1 || hyper.l2 < 1)
    throw Error("pcanet: filter counts l1, l2 must be positive");
  if (hyper.block_h < 1 || hyper.block_w < 1)
    throw Error("pcanet: block dimensions must be positive");
  if (hyper.l1 > hyper.k1 * hyper.k2 * channels)
    throw Error("pcanet: l1 = " + std::to_string(hyper.l1) +
                " exceeds stage-1 patch dimension " +
                std::to_string(hyper.k1 * hyper.k2 * channels));
  if (hyper.l2 > hyper.k1 * hyper.k2)
    throw Error("pcanet: l2 = " + std::to_string(hyper.l2) +
                " exceeds stage-2 patch dimension " +
                std::to_string(hyper.k1 * hyper.k2));
}

// Applies the deterministic sign convention to one vectorized filter.
void fix_sign(Eigen::Ref<Eigen::VectorXd> filter) {
  int best = 0;
  double best_abs = std::abs(filter[0]);
  for (int i = 1; i < filter.size(); ++i) {
    const double a = std::abs(filter[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (filter[best] < 0.0) filter = -filter;
}

}  // namespace

PatchMatrix extract_patches(const Image& map, int k1, int k2) {
  const int h = map.height();
  const int w = map.width();
  const int c = map.channels();
  if (k1 > h || k2 > w)
    throw Error("extract_patches: patch size exceeds map dimensions");
  const int ph = h - k1 + 1;
  const int pw = w - k2 + 1;
  PatchMatrix patches(static_cast<Eigen::Index>(k1) * k2 * c,
                      static_cast<Eigen::Index>(ph) * pw);
  for (int py = 0; py < ph; ++py) {
    for (int px = 0; px < pw; ++px) {
      const Eigen::Index col = static_cast<Eigen::Index>(py) * pw + px;
      Eigen::Index row = 0;
      for (int ch = 0; ch < c; ++ch)
        for (int dy = 0; dy < k1; ++dy)
          for (int dx = 0; dx < k2; ++dx)
            patches(row++, col) = map.at(ch, py + dy, px + dx);
    }
  }
  return patches;
}

PatchMatrix remove_patch_mean(PatchMatrix patches) {
  if (patches.size() == 0) throw Error("remove_patch_mean: empty patch matrix");
  for (Eigen::Index col = 0; col < patches.cols(); ++col)
    patches.col(col).array() -= patches.col(col).mean();
  return patches;
}

FilterBank learn_filters_from_covariance(const Eigen::MatrixXd& covariance, int count,
                                         int k1, int k2, int channels) {
  const Eigen::Index dim = covariance.rows();
  if (covariance.cols() != dim) throw Error("learn_filters: covariance must be square");
  if (dim != static_cast<Eigen::Index>(k1) * k2 * channels)
    throw Error("learn_filters: covariance dimension does not match filter geometry");
  if (count < 1 || count > dim)
    throw Error("learn_filters: requested " + std::to_string(count) +
                " filters from patch dimension " + std::to_string(dim));
  const double trace = covariance.trace();
  if (!(trace > 1e-18 * static_cast<double>(dim)))
    throw DegenerateInputError(
        "learn_filters: degenerate input, patch covariance is zero "
        "(all patches constant after mean removal)");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success)
    throw Error("learn_filters: eigendecomposition failed");

  FilterBank bank;
  bank.k1 = k1;
  bank.k2 = k2;
  bank.channels = channels;
  bank.filters.resize(dim, count);
  bank.eigenvalues.resize(count);
  // Eigen returns ascending order; take the trailing columns reversed.
  for (int l = 0; l < count; ++l) {
    const Eigen::Index src = dim - 1 - l;
    bank.filters.col(l) = solver.eigenvectors().col(src);
    bank.eigenvalues[l] = std::max(0.0, solver.eigenvalues()[src]);
    fix_sign(bank.filters.col(l));
  }
  return bank;
}

FilterBank learn_filters(const PatchMatrix& patches, int count, int k1, int k2, int channels) {
  if (patches.size() == 0) throw Error("learn_filters: empty patch matrix");
  const Eigen::MatrixXd covariance = patches * patches.transpose();
  return learn_filters_from_covariance(covariance, count, k1, k2, channels);
}

namespace {

// Cross-correlation of one map with one vectorized filter, zero padded so the
// output keeps the input's spatial size.
Grid correlate(const Image& map, const FilterBank& bank, int which) {
  const int h = map.height();
  const int w = map.width();
  const int k1 = bank.k1;
  const int k2 = bank.k2;
  const int pad_y = (k1 - 1) / 2;
  const int pad_x = (k2 - 1) / 2;
  Grid out(h, w);
  const auto filter = bank.filters.col(which);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int ch = 0; ch < bank.channels; ++ch) {
        const Grid& plane = map.plane(ch);
        for (int dy = 0; dy < k1; ++dy) {
          const int sy = y + dy - pad_y;
          if (sy < 0 || sy >= h) continue;
          for (int dx = 0; dx < k2; ++dx) {
            const int sx = x + dx - pad_x;
            if (sx < 0 || sx >= w) continue;
            acc += plane.at(sy, sx) * filter[(static_cast<Eigen::Index>(ch) * k1 + dy) * k2 + dx];
          }
        }
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

}  // namespace

std::vector<Grid> convolve_map(const Image& map, const FilterBank& bank) {
  if (map.channels() != bank.channels)
    throw Error("convolve_bank: map has " + std::to_string(map.channels()) +
                " channels but filters expect " + std::to_string(bank.channels));
  std::vector<Grid> out;
  out.reserve(bank.count());
  for (int l = 0; l < bank.count(); ++l) out.push_back(correlate(map, bank, l));
  return out;
}

std::vector<Grid> convolve_bank(const std::vector<Image>& maps, const FilterBank& bank) {
  std::vector<Grid> out;
  out.reserve(maps.size() * bank.count());
  for (const Image& map : maps)
    for (Grid& g : convolve_map(map, bank)) out.push_back(std::move(g));
  return out;
}

std::vector<Grid> lrn_normalize(const std::vector<Grid>& maps, const LrnParams& params) {
  if (maps.empty()) return {};
  if (params.bias + params.weight <= 0.0)
    throw Error("lrn_normalize: bias + weight must be positive");
  if (params.depth < 1 || params.exponent <= 0.0 || params.bias < 0.0 || params.weight < 0.0)
    throw Error("lrn_normalize: invalid parameters");
  const int count = static_cast<int>(maps.size());
  for (int i = 1; i < count; ++i)
    if (!maps[i].same_shape(maps[0]))
      throw Error("lrn_normalize: inconsistent map dimensions");

  const int half = params.depth / 2;
  std::vector<Grid> out(maps.begin(), maps.end());
  const std::size_t pixels = maps[0].size();
  for (int i = 0; i < count; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(count - 1, i + half);
    for (std::size_t p = 0; p < pixels; ++p) {
      double energy = 0.0;
      for (int j = lo; j <= hi; ++j) {
        const double a = maps[j].values()[p];
        energy += a * a;
      }
      out[i].values()[p] =
          maps[i].values()[p] / std::pow(params.bias + params.weight * energy, params.exponent);
    }
  }
  return out;
}

EncodedMap binarize_encode(const std::vector<Grid>& stage2_outputs, int expected_count) {
  if (stage2_outputs.empty()) throw Error("binarize_encode: no maps");
  const int count = static_cast<int>(stage2_outputs.size());
  if (expected_count >= 0 && count != expected_count)
    throw Error("binarize_encode: got " + std::to_string(count) + " maps, expected " +
                std::to_string(expected_count));
  if (count > 31) throw Error("binarize_encode: more than 31 maps cannot be bit-packed");
  for (int m = 1; m < count; ++m)
    if (!stage2_outputs[m].same_shape(stage2_outputs[0]))
      throw Error("binarize_encode: inconsistent map dimensions");

  EncodedMap encoded;
  encoded.height = stage2_outputs[0].height();
  encoded.width = stage2_outputs[0].width();
  encoded.values.assign(stage2_outputs[0].size(), 0);
  for (int m = 0; m < count; ++m) {
    const std::uint32_t bit = 1u << m;
    const auto& vals = stage2_outputs[m].values();
    for (std::size_t p = 0; p < vals.size(); ++p)
      if (vals[p] > 0.0) encoded.values[p] |= bit;  // H(0) = 0
  }
  return encoded;
}

int block_count(int height, int width, const Hyper& hyper) {
  const int by = (height + hyper.block_h - 1) / hyper.block_h;
  const int bx = (width + hyper.block_w - 1) / hyper.block_w;
  return by * bx;
}

std::int64_t feature_length(int height, int width, const Hyper& hyper) {
  return (std::int64_t{1} << hyper.l2) * hyper.l1 * block_count(height, width, hyper);
}

std::vector<double> block_histogram_counts(const EncodedMap& encoded, const Hyper& hyper) {
  const int bins = 1 << hyper.l2;
  const int by = (encoded.height + hyper.block_h - 1) / hyper.block_h;
  const int bx = (encoded.width + hyper.block_w - 1) / hyper.block_w;
  std::vector<double> counts(static_cast<std::size_t>(by) * bx * bins, 0.0);
  for (int block_y = 0; block_y < by; ++block_y) {
    for (int block_x = 0; block_x < bx; ++block_x) {
      const std::size_t base =
          (static_cast<std::size_t>(block_y) * bx + block_x) * bins;
      const int y0 = block_y * hyper.block_h;
      const int x0 = block_x * hyper.block_w;
      const int y1 = std::min(y0 + hyper.block_h, encoded.height);
      const int x1 = std::min(x0 + hyper.block_w, encoded.width);
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
          const std::uint32_t t = encoded.at(y, x);
          if (t >= static_cast<std::uint32_t>(bins))
            throw Error("block_histogram: encoded value out of range");
          counts[base + t] += 1.0;
        }
    }
  }
  return counts;
}

std::vector<double> block_histogram(const EncodedMap& encoded, const Hyper& hyper) {
  std::vector<double> hist = block_histogram_counts(encoded, hyper);
  const int bins = 1 << hyper.l2;
  for (std::size_t base = 0; base < hist.size(); base += bins) {
    double total = 0.0;
    for (int b = 0; b < bins; ++b) total += hist[base + b];
    if (total > 0.0)
      for (int b = 0; b < bins; ++b) hist[base + b] /= total;
  }
  return hist;
}

Model train(const std::vector<FlowMap>& maps, const Hyper& hyper, const LrnParams& lrn) {
  if (maps.empty()) throw Error("pcanet::train: need at least one map");
  const int h = maps[0].height();
  const int w = maps[0].width();
  const int c = maps[0].channels();
  for (const auto& m : maps)
    if (m.height() != h || m.width() != w || m.channels() != c)
      throw Error("pcanet::train: all maps must share dimensions");
  validate_hyper(hyper, c);

  const int dim1 = hyper.k1 * hyper.k2 * c;
  Eigen::MatrixXd cov1 = Eigen::MatrixXd::Zero(dim1, dim1);
  for (const auto& map : maps) {
    const PatchMatrix patches = remove_patch_mean(extract_patches(map, hyper.k1, hyper.k2));
    cov1.noalias() += patches * patches.transpose();
  }

  Model model;
  model.hyper = hyper;
  model.lrn = lrn;
  model.input_height = h;
  model.input_width = w;
  model.input_channels = c;
  model.bank1 = learn_filters_from_covariance(cov1, hyper.l1, hyper.k1, hyper.k2, c);
  model.bank1.stage = 1;

  const int dim2 = hyper.k1 * hyper.k2;
  Eigen::MatrixXd cov2 = Eigen::MatrixXd::Zero(dim2, dim2);
  for (const auto& map : maps) {
    std::vector<Grid> stage1 = convolve_map(map, model.bank1);
    if (hyper.lrn_enabled) stage1 = lrn_normalize(stage1, lrn);
    for (const Grid& response : stage1) {
      const PatchMatrix patches =
          remove_patch_mean(extract_patches(Image::from_plane(response), hyper.k1, hyper.k2));
      cov2.noalias() += patches * patches.transpose();
    }
  }
  model.bank2 = learn_filters_from_covariance(cov2, hyper.l2, hyper.k1, hyper.k2, 1);
  model.bank2.stage = 2;
  return model;
}

FeatureVector extract_feature(const FlowMap& map, const Model& model) {
  if (map.height() != model.input_height || map.width() != model.input_width ||
      map.channels() != model.input_channels)
    throw Error("extract_feature: map is " + std::to_string(map.height()) + "x" +
                std::to_string(map.width()) + "x" + std::to_string(map.channels()) +
                " but the model was trained on " + std::to_string(model.input_height) + "x" +
                std::to_string(model.input_width) + "x" + std::to_string(model.input_channels));

  const Hyper& hyper = model.hyper;
  std::vector<Grid> stage1 = convolve_map(map, model.bank1);
  if (hyper.lrn_enabled) stage1 = lrn_normalize(stage1, model.lrn);

  const int bins = 1 << hyper.l2;
  const int blocks = block_count(map.height(), map.width(), hyper);
  FeatureVector feature(static_cast<Eigen::Index>(bins) * hyper.l1 * blocks);
  Eigen::Index offset = 0;
  for (const Grid& response : stage1) {
    std::vector<Grid> stage2 = convolve_map(Image::from_plane(response), model.bank2);
    if (hyper.lrn_enabled) stage2 = lrn_normalize(stage2, model.lrn);
    const EncodedMap encoded = binarize_encode(stage2, hyper.l2);
    const std::vector<double> hist = block_histogram(encoded, hyper);
    for (double v : hist) feature[offset++] = v;
  }
  return feature;
}

}  // namespace aed::pcanet
