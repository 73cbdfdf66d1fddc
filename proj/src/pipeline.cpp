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

#include "aed/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace aed::pipeline {

namespace {

constexpr int kAugmentFullH = 120, kAugmentFullW = 160;
constexpr int kAugmentCropH = 96, kAugmentCropW = 128;
constexpr int kAugmentRowOffsets[3] = {0, 12, 24};
constexpr int kAugmentColOffsets[3] = {0, 16, 32};

// Nearest-rank percentile of all flow magnitudes pooled over the fields.
double magnitude_percentile(const std::vector<FlowField>& fields, double percentile) {
  std::vector<double> magnitudes;
  std::size_t total = 0;
  for (const auto& f : fields) total += f.u.size();
  magnitudes.reserve(total);
  for (const auto& f : fields)
    for (std::size_t i = 0; i < f.u.size(); ++i)
      magnitudes.push_back(std::hypot(f.u.values()[i], f.v.values()[i]));
  std::sort(magnitudes.begin(), magnitudes.end());
  const std::size_t n = magnitudes.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(n)));
  if (rank > 0) --rank;
  return magnitudes[std::min(rank, n - 1)];
}

// Shared by training and scoring so the test path reproduces the training
// path bit for bit: with augmentation the working map is the full-map
// variant (resized via the 120x160 intermediate), otherwise a direct resize.
FlowMap preprocess_full_map(const FlowMap& map, const Config& config) {
  if (config.augment_enabled && config.eval_mode == EvalMode::frame_level) {
    const FlowMap full = resize_bilinear(map, kAugmentFullH, kAugmentFullW);
    return resize_bilinear(full, config.working_h, config.working_w);
  }
  return resize_bilinear(map, config.working_h, config.working_w);
}

struct Preprocessed {
  std::vector<FlowField> flows;   // one per consecutive frame pair
  double magnitude_cap = 0.0;
};

Preprocessed compute_flows(const std::vector<GrayFrame>& frames, const Config& config,
                           double frozen_cap) {
  if (frames.size() < 2) throw Error("pipeline: need at least 2 frames");
  for (const auto& frame : frames) {
    validate_gray_frame(frame);
    if (!frame.same_shape(frames[0]))
      throw Error("pipeline: all frames must share dimensions");
  }
  Preprocessed pre;
  pre.flows.reserve(frames.size() - 1);
  for (std::size_t t = 0; t + 1 < frames.size(); ++t)
    pre.flows.push_back(flow::compute_flow(frames[t], frames[t + 1], config.hs));
  pre.magnitude_cap =
      frozen_cap > 0.0 ? frozen_cap : magnitude_percentile(pre.flows, config.cap_percentile);
  return pre;
}

void check_frame_dims(const Model& model, const std::vector<GrayFrame>& frames) {
  if (frames.empty()) throw Error("pipeline: no frames to score");
  if (frames[0].height() != model.frame_height || frames[0].width() != model.frame_width)
    throw Error("pipeline: frames are " + std::to_string(frames[0].height()) + "x" +
                std::to_string(frames[0].width()) + " but the model was trained on " +
                std::to_string(model.frame_height) + "x" + std::to_string(model.frame_width));
}

void validate_config(const Config& config) {
  if (config.working_h < 1 || config.working_w < 1)
    throw Error("pipeline: working dimensions must be positive");
  if (config.cap_percentile <= 0.0 || config.cap_percentile > 1.0)
    throw Error("pipeline: cap percentile must lie in (0,1]");
  if (config.gate.diff_threshold <= 0.0 || config.gate.diff_threshold >= 1.0)
    throw Error("pipeline: gate diff_threshold must lie in (0,1)");
  if (config.gate.min_blob_area < 1 || config.gate.min_blob_count < 0)
    throw Error("pipeline: invalid gate blob parameters");
  if (config.eval_mode == EvalMode::pixel_level &&
      (config.patch_h < 1 || config.patch_w < 1))
    throw Error("pipeline: patch dimensions must be positive");
}

}  // namespace

GateResult foreground_gate(const FlowField& flow, const GateParams& params,
                           double magnitude_cap) {
  const int h = flow.height();
  const int w = flow.width();
  const double threshold = params.diff_threshold * magnitude_cap;
  std::vector<char> mask(static_cast<std::size_t>(h) * w, 0);
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = std::hypot(flow.u.values()[i], flow.v.values()[i]) > threshold ? 1 : 0;

  // 8-connected components via an explicit stack flood fill.
  int blob_count = 0;
  std::vector<std::pair<int, int>> stack;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (mask[static_cast<std::size_t>(sy) * w + sx] != 1) continue;
      int area = 0;
      stack.push_back({sy, sx});
      mask[static_cast<std::size_t>(sy) * w + sx] = 2;
      while (!stack.empty()) {
        const auto [y, x] = stack.back();
        stack.pop_back();
        ++area;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = y + dy;
            const int nx = x + dx;
            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
            auto& cell = mask[static_cast<std::size_t>(ny) * w + nx];
            if (cell == 1) {
              cell = 2;
              stack.push_back({ny, nx});
            }
          }
        }
      }
      if (area >= params.min_blob_area) ++blob_count;
    }
  }
  return GateResult{blob_count >= params.min_blob_count, blob_count};
}

std::vector<FlowMap> augment(const FlowMap& map, int working_h, int working_w) {
  const FlowMap full = resize_bilinear(map, kAugmentFullH, kAugmentFullW);
  std::vector<FlowMap> out;
  out.reserve(10);
  out.push_back(resize_bilinear(full, working_h, working_w));
  for (int row_offset : kAugmentRowOffsets) {
    for (int col_offset : kAugmentColOffsets) {
      FlowMap crop(kAugmentCropH, kAugmentCropW, 3);
      for (int c = 0; c < 3; ++c)
        for (int y = 0; y < kAugmentCropH; ++y)
          for (int x = 0; x < kAugmentCropW; ++x)
            crop.at(c, y, x) = full.at(c, y + row_offset, x + col_offset);
      out.push_back(resize_bilinear(crop, working_h, working_w));
    }
  }
  return out;
}

std::vector<std::pair<std::pair<int, int>, FlowMap>> patchify(const FlowMap& map,
                                                              int patch_h, int patch_w) {
  if (patch_h > map.height() || patch_w > map.width())
    throw Error("patchify: patch " + std::to_string(patch_h) + "x" + std::to_string(patch_w) +
                " exceeds frame " + std::to_string(map.height()) + "x" +
                std::to_string(map.width()));
  std::vector<std::pair<std::pair<int, int>, FlowMap>> out;
  for (int y0 = 0; y0 + patch_h <= map.height(); y0 += patch_h) {
    for (int x0 = 0; x0 + patch_w <= map.width(); x0 += patch_w) {
      FlowMap tile(patch_h, patch_w, map.channels());
      for (int c = 0; c < map.channels(); ++c)
        for (int y = 0; y < patch_h; ++y)
          for (int x = 0; x < patch_w; ++x)
            tile.at(c, y, x) = map.at(c, y0 + y, x0 + x);
      out.push_back({{y0, x0}, std::move(tile)});
    }
  }
  return out;
}

Model train(const std::vector<GrayFrame>& frames, const Config& config, TrainInfo* info) {
  validate_config(config);
  Preprocessed pre = compute_flows(frames, config, 0.0);
  if (pre.magnitude_cap <= 0.0)
    throw Error("pipeline::train: no motion in training sequence (magnitude cap is zero)");

  std::vector<FlowMap> kept_maps;
  for (const auto& field : pre.flows) {
    if (!foreground_gate(field, config.gate, pre.magnitude_cap).keep) continue;
    kept_maps.push_back(flow::flow_to_color(field, pre.magnitude_cap));
  }
  if (kept_maps.size() < 2)
    throw Error("pipeline::train: fewer than 2 maps survive the foreground gate");

  std::vector<FlowMap> training_maps;
  if (config.eval_mode == EvalMode::pixel_level) {
    for (const auto& map : kept_maps)
      for (auto& [origin, tile] : patchify(map, config.patch_h, config.patch_w))
        training_maps.push_back(std::move(tile));
  } else if (config.augment_enabled) {
    for (const auto& map : kept_maps)
      for (auto& variant : augment(map, config.working_h, config.working_w))
        training_maps.push_back(std::move(variant));
  } else {
    for (const auto& map : kept_maps)
      training_maps.push_back(resize_bilinear(map, config.working_h, config.working_w));
  }

  Model model;
  model.config = config;
  model.flow_magnitude_cap = pre.magnitude_cap;
  model.frame_height = frames[0].height();
  model.frame_width = frames[0].width();
  model.pcanet = pcanet::train(training_maps, config.pcanet, config.lrn);

  Eigen::MatrixXd features(
      pcanet::feature_length(training_maps[0].height(), training_maps[0].width(), config.pcanet),
      static_cast<Eigen::Index>(training_maps.size()));
  for (std::size_t i = 0; i < training_maps.size(); ++i)
    features.col(static_cast<Eigen::Index>(i)) =
        pcanet::extract_feature(training_maps[i], model.pcanet);
  model.kpca = kpca::fit(features, config.kpca);

  if (info) {
    info->total_frames = static_cast<int>(frames.size());
    info->kept_maps = static_cast<int>(kept_maps.size());
    info->training_features = static_cast<int>(training_maps.size());
    info->feature_dim = features.rows();
  }
  return model;
}

std::vector<FrameScore> score_frames(const Model& model, const std::vector<GrayFrame>& frames) {
  if (model.config.eval_mode != EvalMode::frame_level)
    throw Error("score_frames: model was trained for pixel-level evaluation");
  check_frame_dims(model, frames);
  const Preprocessed pre = compute_flows(frames, model.config, model.flow_magnitude_cap);

  std::vector<FrameScore> scores;
  scores.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    // Frame t is scored from flow(t, t+1); the final frame inherits the last pair.
    const FlowField& field = pre.flows[std::min(t, pre.flows.size() - 1)];
    FrameScore fs;
    fs.frame_index = static_cast<int>(t);
    if (!foreground_gate(field, model.config.gate, model.flow_magnitude_cap).keep) {
      fs.gated_out = true;
      fs.decision = Decision::skipped;
    } else {
      const FlowMap map = preprocess_full_map(
          flow::flow_to_color(field, model.flow_magnitude_cap), model.config);
      const auto result =
          kpca::classify(model.kpca, pcanet::extract_feature(map, model.pcanet));
      fs.score = result.score;
      fs.decision = result.decision;
    }
    scores.push_back(fs);
  }
  return scores;
}

std::vector<FramePatches> score_patches(const Model& model, const std::vector<GrayFrame>& frames) {
  if (model.config.eval_mode != EvalMode::pixel_level)
    throw Error("score_patches: model was trained for frame-level evaluation");
  check_frame_dims(model, frames);
  const Preprocessed pre = compute_flows(frames, model.config, model.flow_magnitude_cap);

  std::vector<FramePatches> out;
  out.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const FlowField& field = pre.flows[std::min(t, pre.flows.size() - 1)];
    FramePatches fp;
    fp.frame_index = static_cast<int>(t);
    if (!foreground_gate(field, model.config.gate, model.flow_magnitude_cap).keep) {
      fp.gated_out = true;
      fp.frame_decision = Decision::skipped;
      out.push_back(std::move(fp));
      continue;
    }
    const FlowMap map = flow::flow_to_color(field, model.flow_magnitude_cap);
    for (const auto& [origin, tile] : patchify(map, model.config.patch_h, model.config.patch_w)) {
      const auto result =
          kpca::classify(model.kpca, pcanet::extract_feature(tile, model.pcanet));
      fp.patches.push_back({origin.first, origin.second, result.score, result.decision});
    }
    fp.frame_score = 0.0;
    for (const auto& p : fp.patches) fp.frame_score = std::max(fp.frame_score, p.score);
    fp.frame_decision =
        fp.frame_score > model.kpca.threshold ? Decision::anomaly : Decision::normal;
    out.push_back(std::move(fp));
  }
  return out;
}

}  // namespace aed::pipeline
