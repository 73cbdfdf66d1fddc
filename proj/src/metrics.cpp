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

#include "aed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace aed::metrics {

namespace {

void validate(const LabeledScores& data) {
  if (data.scores.size() != data.labels.size())
    throw Error("metrics: scores and labels must have equal lengths");
  if (data.scores.empty()) throw Error("metrics: empty score set");
  int positives = 0, negatives = 0;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    if (!std::isfinite(data.scores[i])) throw Error("metrics: non-finite score");
    if (data.labels[i] != 0 && data.labels[i] != 1)
      throw Error("metrics: labels must be 0 (normal) or 1 (abnormal)");
    (data.labels[i] == 1 ? positives : negatives)++;
  }
  if (positives == 0 || negatives == 0)
    throw Error("metrics: ROC needs at least one positive and one negative label");
}

}  // namespace

RocCurve roc(const LabeledScores& data) {
  validate(data);

  // Group ties: per distinct score, how many positives/negatives carry it.
  std::map<double, std::pair<int, int>> groups;  // score -> (pos, neg)
  int total_pos = 0, total_neg = 0;
  for (std::size_t i = 0; i < data.scores.size(); ++i) {
    auto& g = groups[data.scores[i]];
    if (data.labels[i] == 1) {
      ++g.first;
      ++total_pos;
    } else {
      ++g.second;
      ++total_neg;
    }
  }

  // Distinct scores descending; lowering the threshold past a distinct value
  // admits that value's whole tie group at once.
  std::vector<std::pair<double, std::pair<int, int>>> descending(groups.rbegin(), groups.rend());

  RocCurve curve;
  // At threshold d_max nothing satisfies score > threshold.
  curve.points.push_back({descending.front().first, 0.0, 0.0});
  int pos_above = 0, neg_above = 0;
  for (std::size_t k = 0; k < descending.size(); ++k) {
    pos_above += descending[k].second.first;
    neg_above += descending[k].second.second;
    // score > t admits groups 0..k exactly when t is the next distinct value
    // below (or any t under the minimum for the final point).
    const double threshold = k + 1 < descending.size()
                                 ? descending[k + 1].first
                                 : -std::numeric_limits<double>::infinity();
    curve.points.push_back({threshold,
                            static_cast<double>(neg_above) / total_neg,
                            static_cast<double>(pos_above) / total_pos});
  }

  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  curve.auc = auc;

  // EER: the crossing of fpr = 1 - tpr along the curve.
  double eer = 1.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    const double ga = a.fpr + a.tpr - 1.0;
    const double gb = b.fpr + b.tpr - 1.0;
    if (ga <= 0.0 && gb >= 0.0) {
      const double denom = gb - ga;
      const double s = denom > 0.0 ? -ga / denom : 0.0;
      eer = a.fpr + s * (b.fpr - a.fpr);
      break;
    }
  }
  curve.eer = eer;
  return curve;
}

double auc_pairwise_oracle(const LabeledScores& data) {
  validate(data);
  double ordered = 0.0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < data.scores.size(); ++i) {
    if (data.labels[i] != 1) continue;
    for (std::size_t j = 0; j < data.scores.size(); ++j) {
      if (data.labels[j] != 0) continue;
      ++pairs;
      if (data.scores[i] > data.scores[j])
        ordered += 1.0;
      else if (data.scores[i] == data.scores[j])
        ordered += 0.5;
    }
  }
  return ordered / static_cast<double>(pairs);
}

}  // namespace aed::metrics
