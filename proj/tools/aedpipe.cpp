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

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aed/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Self-supervised video anomaly detection (optical flow -> "
               "PCAnet features -> kernel-PCA scoring)"};
  app.require_subcommand(1);

  aed::cli::ConfigSources sources;
  bool show_config = false;

  auto* train = app.add_subcommand("train", "Train a detector on normal-only frames");
  std::string train_data, train_out = "model.aed";
  train->add_option("--data", train_data, "Directory of training frames");
  train->add_option("--out", train_out, "Model container output path");
  train->add_option("--config", sources.config_file, "Config file (key=value lines)");
  train->add_option("--preset", sources.preset, "Named preset: umn or ucsd");
  train->add_option("--set", sources.overrides, "Override one key, e.g. --set kpca.sigma=0.8");
  train->add_flag("--show-config", show_config, "Print the effective config and exit");

  auto* score = app.add_subcommand("score", "Score frames against a trained model");
  std::string score_model, score_data, score_out = "scores.csv";
  score->add_option("--model", score_model, "Model container")->required();
  score->add_option("--data", score_data, "Directory of frames to score");
  score->add_option("--out", score_out, "Score CSV output path");
  score->add_flag("--show-config", show_config, "Print the model's stored config and exit");

  auto* eval = app.add_subcommand("eval", "Compute ROC/AUC/EER from score and label CSVs");
  std::string eval_scores, eval_labels, eval_out;
  bool skipped_as_negative = false;
  eval->add_option("--scores", eval_scores, "Score CSV from `score`")->required();
  eval->add_option("--labels", eval_labels, "Label CSV (frame_index,label)")->required();
  eval->add_option("--out", eval_out, "ROC CSV output path (optional)");
  eval->add_flag("--skipped-as-negative", skipped_as_negative,
                 "Count gated-out frames as negatives instead of excluding them");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled scene");
  std::string synth_spec, synth_out;
  std::optional<std::uint64_t> seed;
  synth->add_option("--spec", synth_spec, "Synth spec file (synth.* keys); defaults when omitted");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", seed, "Override the spec's random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? aed::cli::kExitOk : aed::cli::kExitUsage;
  }

  if (train->parsed()) {
    if (!show_config && train_data.empty()) {
      std::cerr << "train: --data is required\n";
      return aed::cli::kExitUsage;
    }
    return aed::cli::run_train(train_data, sources, train_out, show_config,
                               std::cout, std::cerr);
  }
  if (score->parsed()) {
    if (!show_config && score_data.empty()) {
      std::cerr << "score: --data is required\n";
      return aed::cli::kExitUsage;
    }
    return aed::cli::run_score(score_model, score_data, score_out, show_config,
                               std::cout, std::cerr);
  }
  if (eval->parsed())
    return aed::cli::run_eval(eval_scores, eval_labels, eval_out, skipped_as_negative,
                              std::cout, std::cerr);
  if (synth->parsed())
    return aed::cli::run_synth(synth_spec, synth_out, seed, std::cout, std::cerr);
  return aed::cli::kExitUsage;
}
