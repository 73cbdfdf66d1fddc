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

#include "aed/error.hpp"

namespace aed::metrics {

/// Scores with parallel labels; label 1 marks abnormal (positive), 0 normal.
struct LabeledScores {
  std::vector<double> scores;
  std::vector<int> labels;
};

struct RocPoint {
  double threshold;  // decision: score > threshold => positive
  double fpr;
  double tpr;
};

/// Step-function ROC over all distinct score thresholds, from (0,0) to (1,1).
struct RocCurve {
  std::vector<RocPoint> points;
  double auc;  // trapezoidal integral of the points
  double eer;  // fpr = 1 - tpr crossing, linearly interpolated
};

/// Sweeps every distinct score as a threshold (ties grouped), then computes
/// AUC by trapezoid and EER by interpolation.
RocCurve roc(const LabeledScores& data);

/// Mann-Whitney identity: fraction of (positive, negative) pairs ordered
/// correctly, ties counted 0.5. Validation oracle for roc().
double auc_pairwise_oracle(const LabeledScores& data);

}  // namespace aed::metrics
