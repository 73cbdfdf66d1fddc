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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aed/config.hpp"
#include "aed/metrics.hpp"
#include "aed/pipeline.hpp"

namespace aed::cli {

// Subcommand exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Configuration sources for train: preset, then file, then --set overrides.
struct ConfigSources {
  std::string preset;       // empty = none
  std::string config_file;  // empty = none
  std::vector<std::string> overrides;  // raw key=value strings
};

/// Resolves defaults + preset + file + overrides into one flat map.
KeyValues resolve_config(const ConfigSources& sources);

int run_train(const std::string& data_dir, const ConfigSources& sources,
              const std::string& model_out, bool show_config,
              std::ostream& out, std::ostream& err);

int run_score(const std::string& model_file, const std::string& data_dir,
              const std::string& scores_out, bool show_config,
              std::ostream& out, std::ostream& err);

int run_eval(const std::string& scores_csv, const std::string& labels_csv,
             const std::string& roc_out, bool count_skipped_as_negative,
             std::ostream& out, std::ostream& err);

int run_synth(const std::string& spec_file, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override,
              std::ostream& out, std::ostream& err);

/// Frame-level score CSV: frame_index,score,threshold,decision,gated_out.
void write_scores_csv(const std::string& path, const std::vector<pipeline::FrameScore>& scores,
                      double threshold);

/// Pixel-level CSV adds tile_row,tile_col; gated frames emit one row with
/// tile coordinates -1.
void write_patch_scores_csv(const std::string& path,
                            const std::vector<pipeline::FramePatches>& frames,
                            double threshold);

/// One frame's worth of scores as read back from either CSV layout
/// (pixel-level rows are reduced to the max tile score).
struct ScoredFrame {
  int frame_index;
  double score;
  bool skipped;
};

std::vector<ScoredFrame> read_scores_csv(const std::string& path);

/// labels CSV: frame_index,label with label in {0,1}.
std::vector<std::pair<int, int>> read_labels_csv(const std::string& path);

/// Joins scores with labels into a ROC input. Skipped frames are excluded
/// unless count_skipped_as_negative, which keeps them with a sentinel score
/// below every real reconstruction error.
metrics::LabeledScores join_scores_labels(const std::vector<ScoredFrame>& scores,
                                          const std::vector<std::pair<int, int>>& labels,
                                          bool count_skipped_as_negative);

/// ROC CSV: threshold,fpr,tpr rows for every curve point.
void write_roc_csv(const std::string& path, const metrics::RocCurve& curve);

}  // namespace aed::cli
