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

#include <cstdint>
#include <vector>

#include "aed/config.hpp"
#include "aed/image.hpp"

namespace aed::cli {

enum class MotionStyle { divergent, random_scatter };

/// Synthetic crowd scene: anti-aliased discs drifting coherently; inside the
/// anomaly window [anomaly_start, anomaly_end) every disc moves at
/// anomaly_multiplier times its speed, either outward from the frame center
/// (divergent) or in per-particle random directions (random_scatter).
struct SynthSpec {
  int frame_count = 200;
  int height = 120;
  int width = 160;
  int particle_count = 40;
  double speed_min = 1.0;  // px/frame during normal motion
  double speed_max = 2.0;
  int anomaly_start = 150;  // window runs to the end, like an escape scene
  int anomaly_end = 200;
  double anomaly_multiplier = 4.0;
  MotionStyle style = MotionStyle::divergent;
  std::uint64_t seed = 7;
};

struct SynthScene {
  std::vector<GrayFrame> frames;
  std::vector<int> labels;  // 1 inside the anomaly window
};

/// Deterministic under a fixed seed.
SynthScene generate_scene(const SynthSpec& spec);

/// Reads synth.* keys from a flat config file (same format as the pipeline
/// config); missing keys keep their defaults.
SynthSpec synth_spec_from_file(const std::string& path);

}  // namespace aed::cli
