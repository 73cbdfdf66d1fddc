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

#include <vector>

#include "aed/flow.hpp"
#include "aed/image.hpp"
#include "aed/kpca.hpp"
#include "aed/pcanet.hpp"

namespace aed::pipeline {

/// Foreground gate: flow magnitude is binarized at diff_threshold (as a
/// fraction of the trained magnitude cap); 8-connected blobs of at least
/// min_blob_area pixels are counted and the frame is kept when the count
/// reaches min_blob_count.
struct GateParams {
  double diff_threshold = 0.1;
  int min_blob_area = 25;
  int min_blob_count = 1;
};

enum class EvalMode { frame_level, pixel_level };

struct Config {
  flow::HsParams hs;
  pcanet::Hyper pcanet;
  pcanet::LrnParams lrn;
  kpca::Hyper kpca;
  GateParams gate;
  bool augment_enabled = true;
  EvalMode eval_mode = EvalMode::frame_level;
  int patch_h = 12;  // pixel-level tile size
  int patch_w = 16;
  int working_h = 24;  // size every map is reduced to before PCAnet
  int working_w = 32;
  double cap_percentile = 0.99;  // training flow-magnitude percentile
};

/// Complete trained detector.
struct Model {
  Config config;
  pcanet::Model pcanet;
  kpca::Model kpca;
  double flow_magnitude_cap = 0.0;
  int frame_height = 0;  // raw frame dimensions seen at training time
  int frame_width = 0;
};

struct FrameScore {
  int frame_index = 0;
  double score = 0.0;
  bool gated_out = false;
  Decision decision = Decision::normal;
};

struct GateResult {
  bool keep;
  int blob_count;
};

/// One pixel-level tile: origin of the tile plus its score and decision.
struct PatchScore {
  int tile_row = 0;
  int tile_col = 0;
  double score = 0.0;
  Decision decision = Decision::normal;
};

/// Pixel-level output for one frame. frame_score is the max over tile
/// scores; a gated-out frame carries no patches and decision skipped.
struct FramePatches {
  int frame_index = 0;
  bool gated_out = false;
  std::vector<PatchScore> patches;
  double frame_score = 0.0;
  Decision frame_decision = Decision::normal;
};

GateResult foreground_gate(const FlowField& flow, const GateParams& params,
                           double magnitude_cap);

/// Ten training variants of one map: the 120x160 resize plus nine 96x128
/// crops on the {0,12,24} x {0,16,32} offset grid, all resized to the
/// working size. Output order: full map first, then crops row-major.
std::vector<FlowMap> augment(const FlowMap& map, int working_h, int working_w);

/// Non-overlapping tiling; trailing partial tiles are dropped.
std::vector<std::pair<std::pair<int, int>, FlowMap>> patchify(const FlowMap& map,
                                                              int patch_h, int patch_w);

/// Training counts surfaced for diagnostics.
struct TrainInfo {
  int total_frames = 0;
  int kept_maps = 0;           // flow maps surviving the gate
  int training_features = 0;   // after augmentation / tiling
  std::int64_t feature_dim = 0;
};

/// Trains the full detector on an ordered normal-only sequence: flow,
/// magnitude cap, color maps, foreground gate, augmentation (frame mode) or
/// patch tiling (pixel mode), PCAnet, then the kPCA threshold.
Model train(const std::vector<GrayFrame>& frames, const Config& config,
            TrainInfo* info = nullptr);

/// Scores every frame by mirroring the training preprocessing with frozen
/// parameters (no test-time augmentation). Frame t uses flow(t, t+1); the
/// final frame inherits the last pair's flow. Gated frames come back skipped.
std::vector<FrameScore> score_frames(const Model& model, const std::vector<GrayFrame>& frames);

/// Pixel-level scoring: per frame, every tile of the flow color map is
/// scored independently; the frame-level score is the max over tiles.
std::vector<FramePatches> score_patches(const Model& model, const std::vector<GrayFrame>& frames);

}  // namespace aed::pipeline
