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

#include "aed/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "aed/frame_io.hpp"
#include "aed/model_io.hpp"
#include "aed/synth.hpp"

namespace aed::cli {

namespace {

namespace fs = std::filesystem;

// Sentinel score for skipped frames when they are counted as negatives;
// every real reconstruction error is >= 0.
constexpr double kSkippedScore = -1.0;

std::string fmt_double(double v) {
  char buf[64];
  if (std::isinf(v))
    std::snprintf(buf, sizeof(buf), v > 0 ? "inf" : "-inf");
  else
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::normal: return "normal";
    case Decision::anomaly: return "anomaly";
    case Decision::skipped: return "skipped";
  }
  return "unknown";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

KeyValues resolve_config(const ConfigSources& sources) {
  KeyValues config = default_config();
  if (!sources.preset.empty()) apply_preset(config, sources.preset);
  if (!sources.config_file.empty()) apply_overrides(config, load_config_file(sources.config_file));
  KeyValues flag_overrides;
  for (const std::string& kv : sources.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error("config: --set expects key=value, got '" + kv + "'");
    flag_overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  apply_overrides(config, flag_overrides);
  return config;
}

int run_train(const std::string& data_dir, const ConfigSources& sources,
              const std::string& model_out, bool show_config,
              std::ostream& out, std::ostream& err) {
  try {
    const KeyValues keys = resolve_config(sources);
    if (show_config) {
      out << canonical_config_text(keys);
      return kExitOk;
    }
    const pipeline::Config config = make_pipeline_config(keys);
    const std::vector<GrayFrame> frames = load_frame_dir(data_dir);

    pipeline::TrainInfo info;
    ModelFile file;
    file.model = pipeline::train(frames, config, &info);
    file.config_text = canonical_config_text(keys);
    save_model(model_out, file);

    out << "frames: " << info.total_frames << "\n"
        << "kept maps: " << info.kept_maps << "\n"
        << "training features: " << info.training_features << "\n"
        << "feature dimension: " << info.feature_dim << "\n"
        << "kpca rank (q): " << file.model.kpca.q << "\n"
        << "threshold: " << fmt_double(file.model.kpca.threshold) << "\n"
        << "model: " << model_out << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "train: " << e.what() << "\n";
    return kExitData;
  }
}

int run_score(const std::string& model_file, const std::string& data_dir,
              const std::string& scores_out, bool show_config,
              std::ostream& out, std::ostream& err) {
  try {
    const ModelFile file = load_model(model_file);
    if (show_config) {
      out << file.config_text;
      return kExitOk;
    }
    const std::vector<GrayFrame> frames = load_frame_dir(data_dir);
    if (file.model.config.eval_mode == pipeline::EvalMode::frame_level) {
      const auto scores = pipeline::score_frames(file.model, frames);
      write_scores_csv(scores_out, scores, file.model.kpca.threshold);
      int anomalies = 0, skipped = 0;
      for (const auto& s : scores) {
        anomalies += s.decision == Decision::anomaly;
        skipped += s.decision == Decision::skipped;
      }
      out << "frames: " << scores.size() << "\n"
          << "anomalies: " << anomalies << "\n"
          << "skipped: " << skipped << "\n"
          << "scores: " << scores_out << "\n";
    } else {
      const auto frames_out = pipeline::score_patches(file.model, frames);
      write_patch_scores_csv(scores_out, frames_out, file.model.kpca.threshold);
      int anomalies = 0, skipped = 0;
      for (const auto& f : frames_out) {
        anomalies += f.frame_decision == Decision::anomaly;
        skipped += f.gated_out;
      }
      out << "frames: " << frames_out.size() << "\n"
          << "anomalous frames (max over tiles): " << anomalies << "\n"
          << "skipped: " << skipped << "\n"
          << "scores: " << scores_out << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "score: " << e.what() << "\n";
    return kExitData;
  }
}

int run_eval(const std::string& scores_csv, const std::string& labels_csv,
             const std::string& roc_out, bool count_skipped_as_negative,
             std::ostream& out, std::ostream& err) {
  try {
    const auto scores = read_scores_csv(scores_csv);
    const auto labels = read_labels_csv(labels_csv);
    const metrics::LabeledScores data =
        join_scores_labels(scores, labels, count_skipped_as_negative);
    const metrics::RocCurve curve = metrics::roc(data);
    if (!roc_out.empty()) write_roc_csv(roc_out, curve);
    char line[64];
    std::snprintf(line, sizeof(line), "auc=%.4f eer=%.4f\n", curve.auc, curve.eer);
    out << line;
    return kExitOk;
  } catch (const Error& e) {
    err << "eval: " << e.what() << "\n";
    return kExitData;
  }
}

int run_synth(const std::string& spec_file, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override,
              std::ostream& out, std::ostream& err) {
  try {
    SynthSpec spec = spec_file.empty() ? SynthSpec{} : synth_spec_from_file(spec_file);
    if (seed_override) spec.seed = *seed_override;
    const SynthScene scene = generate_scene(spec);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error("synth: cannot create '" + out_dir + "': " + ec.message());

    for (std::size_t t = 0; t < scene.frames.size(); ++t) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%06zu.pgm", t);
      save_pgm((fs::path(out_dir) / name).string(), scene.frames[t]);
    }
    std::ofstream labels((fs::path(out_dir) / "labels.csv").string());
    if (!labels) throw Error("synth: cannot write labels.csv");
    labels << "frame_index,label\n";
    for (std::size_t t = 0; t < scene.labels.size(); ++t)
      labels << t << "," << scene.labels[t] << "\n";
    if (!labels.flush()) throw Error("synth: write failed for labels.csv");

    out << "frames: " << scene.frames.size() << "\n"
        << "positives: "
        << std::count(scene.labels.begin(), scene.labels.end(), 1) << "\n"
        << "out: " << out_dir << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "synth: " << e.what() << "\n";
    return kExitData;
  }
}

void write_scores_csv(const std::string& path, const std::vector<pipeline::FrameScore>& scores,
                      double threshold) {
  std::ofstream out(path);
  if (!out) throw Error("scores: cannot write '" + path + "'");
  out << "frame_index,score,threshold,decision,gated_out\n";
  for (const auto& s : scores)
    out << s.frame_index << "," << fmt_double(s.score) << "," << fmt_double(threshold) << ","
        << decision_name(s.decision) << "," << (s.gated_out ? 1 : 0) << "\n";
  if (!out.flush()) throw Error("scores: write failed for '" + path + "'");
}

void write_patch_scores_csv(const std::string& path,
                            const std::vector<pipeline::FramePatches>& frames,
                            double threshold) {
  std::ofstream out(path);
  if (!out) throw Error("scores: cannot write '" + path + "'");
  out << "frame_index,score,threshold,decision,gated_out,tile_row,tile_col\n";
  for (const auto& f : frames) {
    if (f.gated_out) {
      out << f.frame_index << ",0," << fmt_double(threshold) << ",skipped,1,-1,-1\n";
      continue;
    }
    for (const auto& p : f.patches)
      out << f.frame_index << "," << fmt_double(p.score) << "," << fmt_double(threshold) << ","
          << decision_name(p.decision) << ",0," << p.tile_row << "," << p.tile_col << "\n";
  }
  if (!out.flush()) throw Error("scores: write failed for '" + path + "'");
}

std::vector<ScoredFrame> read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("scores: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("scores: '" + path + "' is empty");
  const bool pixel_level = line.find("tile_row") != std::string::npos;
  if (line.rfind("frame_index,score,threshold,decision,gated_out", 0) != 0)
    throw Error("scores: '" + path + "' has an unrecognized header: " + line);

  // Frame order follows first appearance; pixel-level rows reduce by max.
  std::vector<ScoredFrame> frames;
  std::map<int, std::size_t> by_index;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != (pixel_level ? 7u : 5u))
      throw Error("scores: malformed row at line " + std::to_string(line_no));
    const int index = std::stoi(fields[0]);
    const double score = std::stod(fields[1]);
    const bool skipped = fields[4] == "1";
    auto it = by_index.find(index);
    if (it == by_index.end()) {
      by_index[index] = frames.size();
      frames.push_back({index, skipped ? 0.0 : score, skipped});
    } else {
      ScoredFrame& f = frames[it->second];
      if (!skipped) {
        f.score = f.skipped ? score : std::max(f.score, score);
        f.skipped = false;
      }
    }
  }
  if (frames.empty()) throw Error("scores: '" + path + "' holds no rows");
  return frames;
}

std::vector<std::pair<int, int>> read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("labels: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("labels: '" + path + "' is empty");
  if (line.rfind("frame_index,label", 0) != 0)
    throw Error("labels: '" + path + "' must start with header frame_index,label");
  std::vector<std::pair<int, int>> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw Error("labels: malformed row at line " + std::to_string(line_no));
    labels.emplace_back(std::stoi(fields[0]), std::stoi(fields[1]));
  }
  if (labels.empty()) throw Error("labels: '" + path + "' holds no rows");
  return labels;
}

metrics::LabeledScores join_scores_labels(const std::vector<ScoredFrame>& scores,
                                          const std::vector<std::pair<int, int>>& labels,
                                          bool count_skipped_as_negative) {
  std::map<int, int> label_by_index(labels.begin(), labels.end());
  metrics::LabeledScores data;
  for (const auto& frame : scores) {
    if (frame.skipped && !count_skipped_as_negative) continue;
    const auto it = label_by_index.find(frame.frame_index);
    if (it == label_by_index.end())
      throw Error("eval: scored frame " + std::to_string(frame.frame_index) +
                  " has no label row (index mismatch)");
    data.scores.push_back(frame.skipped ? kSkippedScore : frame.score);
    data.labels.push_back(it->second);
  }
  if (data.scores.empty()) throw Error("eval: no scorable frames after joining labels");
  return data;
}

void write_roc_csv(const std::string& path, const metrics::RocCurve& curve) {
  std::ofstream out(path);
  if (!out) throw Error("roc: cannot write '" + path + "'");
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points)
    out << fmt_double(p.threshold) << "," << fmt_double(p.fpr) << "," << fmt_double(p.tpr) << "\n";
  char summary[64];
  std::snprintf(summary, sizeof(summary), "# auc=%.6f eer=%.6f\n", curve.auc, curve.eer);
  out << summary;
  if (!out.flush()) throw Error("roc: write failed for '" + path + "'");
}

}  // namespace aed::cli
